"""
收敛报告输出：CSV / Markdown 表格 / SVG 双对数误差图
"""
import csv
import math
from pathlib import Path
from typing import Dict, Iterable, List

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from model.errors import ConfigurationError, DomainError  # noqa: E402
from utils.logger import logger  # noqa: E402

from .refinement import REPORT_FORMATS, ConvergenceReport  # noqa: E402


AXIS_SYMBOLS = {"time": "N", "space": "M", "sigma": "J"}
STEP_SYMBOLS = {"time": "τ", "space": "h", "sigma": "σ"}
SUFFIXES = {"csv": ".csv", "markdown": ".md", "svg": ".svg"}


def _format_order(order: float) -> str:
    return "" if math.isnan(order) else f"{order:.4f}"


def _check_report(report: ConvergenceReport) -> None:
    if not report.rows:
        raise DomainError(f"报告 {report.label} 没有任何数据行")


# ======================
# 各格式写出
# ======================
def write_csv(report: ConvergenceReport, path: Path) -> Path:
    """列: resolution,error,order,cpu_seconds[,l2_error]；首行 order 留空"""
    with_l2 = any(row.l2_error is not None for row in report.rows)
    header = ["resolution", "error", "order", "cpu_seconds"] + (["l2_error"] if with_l2 else [])
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in report.rows:
            line = [row.resolution, f"{row.error:.4e}", _format_order(row.order), f"{row.seconds:.4f}"]
            if with_l2:
                line.append("" if row.l2_error is None else f"{row.l2_error:.4e}")
            writer.writerow(line)
    return path


def format_markdown(report: ConvergenceReport) -> str:
    """误差表的列布局: 分辨率 | E | 收敛阶 | CPU(s)"""
    symbol = AXIS_SYMBOLS[report.refine]
    lines = [
        f"### {report.label} ({report.backend})",
        "",
        f"| {symbol} | E | order | CPU (s) |",
        "|---:|---:|---:|---:|",
    ]
    for row in report.rows:
        order = _format_order(row.order) or "--"
        lines.append(f"| {row.resolution} | {row.error:.4e} | {order} | {row.seconds:.3f} |")
    return "\n".join(lines) + "\n"


def write_markdown(report: ConvergenceReport, path: Path) -> Path:
    path.write_text(format_markdown(report), encoding="utf-8")
    return path


def write_svg(report: ConvergenceReport, path: Path) -> Path:
    """误差-步长双对数图，附参考斜率线"""
    steps = np.array([row.step for row in report.rows])
    errors = np.array([row.error for row in report.rows])
    positive = errors > 0

    fig, ax = plt.subplots(figsize=(6, 4.5))
    try:
        ax.loglog(steps[positive], errors[positive], "o-", linewidth=1.5, markersize=5, label="E")
        if positive.any():
            # 参考线过第一个有效点
            anchor = np.flatnonzero(positive)[0]
            slope = report.reference_slope
            ref = errors[anchor] * (steps / steps[anchor]) ** slope
            ax.loglog(steps, ref, "k:", linewidth=0.8, label=f"O({STEP_SYMBOLS[report.refine]}^{slope:g})")
        ax.set_xlabel(STEP_SYMBOLS[report.refine])
        ax.set_ylabel("max error")
        ax.set_title(report.label)
        ax.legend(loc="lower right")
        ax.grid(True, alpha=0.3, which="both")
        fig.savefig(path, format="svg", bbox_inches="tight")
    finally:
        plt.close(fig)
    return path


WRITERS = {
    "csv": write_csv,
    "markdown": write_markdown,
    "svg": write_svg,
}


# ======================
# 对外接口
# ======================
def emit_report(report: ConvergenceReport, fmt: str, path: str | Path) -> Path:
    """以指定格式写出报告；目录不存在时自动创建"""
    _check_report(report)
    try:
        writer = WRITERS[fmt]
    except KeyError:
        raise ConfigurationError(f"未知输出格式: {fmt}（可选: {', '.join(REPORT_FORMATS)}）")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    written = writer(report, path)
    logger.info(f"报告已写出: {written}")
    return written


def emit_reports(report: ConvergenceReport, formats: Iterable[str], output: str | Path) -> List[Path]:
    """
    按多种格式写出同一份报告

    output 的后缀被替换为各格式的默认后缀；只有一种格式时保持 output 原样。
    """
    formats = list(formats)
    output = Path(output)
    if len(formats) == 1:
        return [emit_report(report, formats[0], output)]
    return [emit_report(report, fmt, output.with_suffix(SUFFIXES.get(fmt, ""))) for fmt in formats]


def report_paths(output: str | Path, labels: Iterable[str]) -> Dict[str, Path]:
    """多份报告（--table 预设）共用一个输出前缀时，为每份报告派生文件名"""
    output = Path(output)
    return {label: output.with_name(f"{output.stem}_{label}{output.suffix}") for label in labels}
