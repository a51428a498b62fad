"""
任务调度器
封装 run / table / verify / bench 四类任务，支持收敛报告的后置处理器扩展
"""
from typing import Any, Callable, Dict, List, Optional, Sequence
from datetime import datetime
from dataclasses import dataclass

from experiments import (
    ConvergenceReport,
    ExperimentConfig,
    emit_reports,
    format_bench,
    format_markdown,
    report_paths,
    run_benchmark,
    run_refinement,
    run_verification,
    merge_overrides,
)
from experiments.benchmark import BenchSettings
from utils.logger import logger


# ======================
# 类型定义
# ======================
# 后置处理器函数签名: (report: ConvergenceReport) -> None
PostProcessor = Callable[[ConvergenceReport], None]


@dataclass
class TaskResult:
    """任务执行结果"""
    success: bool
    task_type: str
    message: str
    started_at: datetime
    finished_at: datetime
    details: Optional[dict] = None


# ======================
# 后置处理器注册表
# ======================
_post_processors: List[PostProcessor] = []


def register_processor(processor: PostProcessor) -> None:
    """注册后置处理器"""
    if processor not in _post_processors:
        _post_processors.append(processor)


def unregister_processor(processor: PostProcessor) -> None:
    """注销后置处理器"""
    if processor in _post_processors:
        _post_processors.remove(processor)


def clear_processors() -> None:
    """清空所有后置处理器"""
    _post_processors.clear()


# ======================
# 内置后置处理器
# ======================
def log_report_processor(report: ConvergenceReport) -> None:
    """把最终一行的误差与收敛阶写入日志"""
    last = report.rows[-1]
    logger.info(
        f"实验完成: {report.label}, 最终 {report.refine}={last.resolution}, "
        f"E={last.error:.4e}, order={last.order:.4f}, 参考阶 {report.reference_slope:g}"
    )


def summary_printer_processor(report: ConvergenceReport) -> None:
    """打印 Markdown 误差表"""
    print()
    print(format_markdown(report))


# ======================
# 后置处理器执行
# ======================
def _run_post_processors(report: ConvergenceReport) -> None:
    """
    执行所有已注册的后置处理器
    单个处理器失败不影响其他处理器
    """
    for processor in _post_processors:
        try:
            processor(report)
        except Exception as e:
            # 处理器失败只打印警告，不中断流程
            logger.warning(f"后置处理器 {processor.__name__} 执行失败: {e}")


def _report_details(report: ConvergenceReport, files: Sequence) -> Dict[str, Any]:
    return {
        "label": report.label,
        "resolutions": [row.resolution for row in report.rows],
        "errors": [row.error for row in report.rows],
        "orders": report.orders,
        "files": [str(path) for path in files],
    }


def _failed(task_type: str, started_at: datetime, e: Exception) -> TaskResult:
    logger.error(f"{task_type} 任务异常: {e}", exc_info=True)
    return TaskResult(
        success=False,
        task_type=task_type,
        message=f"任务异常: {str(e)}",
        started_at=started_at,
        finished_at=datetime.now(),
        details={"exception": str(e), "type": type(e).__name__},
    )


# ======================
# 任务执行函数
# ======================
def run_experiment(config: ExperimentConfig) -> TaskResult:
    """
    执行一次加密实验

    流程:
    1. 逐层求解并计算误差 / 收敛阶
    2. 按 config.formats 写出报告
    3. 执行后置处理器
    """
    started_at = datetime.now()
    try:
        report = run_refinement(config)
        files = emit_reports(report, config.formats, config.output)
        _run_post_processors(report)
    except Exception as e:
        return _failed("run", started_at, e)

    last = report.rows[-1]
    return TaskResult(
        success=True,
        task_type="run",
        message=f"{report.label}: E={last.error:.4e}, order={last.order:.4f}",
        started_at=started_at,
        finished_at=datetime.now(),
        details=_report_details(report, files),
    )


def run_table(table: str, overrides: Optional[Dict[str, Any]] = None) -> TaskResult:
    """
    复现一张表：按预设依次运行多组实验

    每组实验的输出文件名由 output 派生（追加实验标签）；命令行参数优先于预设。
    """
    started_at = datetime.now()
    try:
        configs = [ExperimentConfig.from_config(entry) for entry in merge_overrides(table, overrides)]
        paths = report_paths(configs[0].output, [config.label() for config in configs])
        results = []
        for config in configs:
            config.output = str(paths[config.label()])
            results.append(run_experiment(config))
    except Exception as e:
        return _failed("table", started_at, e)

    return TaskResult(
        success=all(result.success for result in results),
        task_type="table",
        message=f"表 {table}: " + ", ".join(f"{r.details.get('label', '?')}={r.success}" for r in results if r.details),
        started_at=started_at,
        finished_at=datetime.now(),
        details={"runs": [result.details for result in results]},
    )


def run_verify(seed: int = 20240601, only: Optional[Sequence[str]] = None) -> TaskResult:
    """运行不变量校验，任一项失败则任务失败"""
    started_at = datetime.now()
    try:
        checks = run_verification(seed=seed, only=only)
    except Exception as e:
        return _failed("verify", started_at, e)

    failed = [check.name for check in checks if not check.passed]
    return TaskResult(
        success=not failed,
        task_type="verify",
        message=f"{len(checks) - len(failed)}/{len(checks)} 项通过" + (f"，失败: {', '.join(failed)}" if failed else ""),
        started_at=started_at,
        finished_at=datetime.now(),
        details={check.name: f"{'PASS' if check.passed else 'FAIL'} ({check.cases} 例, 最差 {check.worst:.3e})" for check in checks},
    )


def run_bench(settings: Optional[BenchSettings] = None) -> TaskResult:
    """计时诊断，只报告不判定"""
    started_at = datetime.now()
    try:
        report = run_benchmark(settings)
    except Exception as e:
        return _failed("bench", started_at, e)

    print()
    print(format_bench(report))
    return TaskResult(
        success=True,
        task_type="bench",
        message=f"M={report.m}, fast 耗时比 {report.ratios('fast')}, stepping 耗时比 {report.ratios('stepping')}",
        started_at=started_at,
        finished_at=datetime.now(),
        details={
            "fast": [(row.n, row.seconds) for row in report.rows if row.backend == "fast"],
            "stepping": [(row.n, row.seconds) for row in report.rows if row.backend == "stepping"],
        },
    )


def execute_task(task_type: str, **options: Any) -> TaskResult:
    """
    统一任务执行入口

    Args:
        task_type: 任务类型
            - "run": 加密实验（options: config=ExperimentConfig）
            - "table": 表格复现（options: table, overrides）
            - "verify": 不变量校验（options: seed, only）
            - "bench": 复杂度诊断（options: settings）

    Returns:
        TaskResult: 任务执行结果
    """
    if task_type == "run":
        return run_experiment(options["config"])

    elif task_type == "table":
        return run_table(options["table"], options.get("overrides"))

    elif task_type == "verify":
        return run_verify(options.get("seed", 20240601), options.get("only"))

    elif task_type == "bench":
        return run_bench(options.get("settings"))

    else:
        return TaskResult(
            success=False,
            task_type=task_type,
            message=f"未知任务类型: {task_type}",
            started_at=datetime.now(),
            finished_at=datetime.now(),
        )


# ======================
# 初始化：注册默认处理器
# ======================
def init_default_processors() -> None:
    """注册默认的后置处理器"""
    register_processor(log_report_processor)
    register_processor(summary_printer_processor)


# 模块加载时自动注册默认处理器
init_default_processors()
