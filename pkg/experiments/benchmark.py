"""
复杂度诊断
固定 M，按 N 翻倍计时两种后端，输出每次翻倍的耗时比
"""
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from config import get_config
from solver.solver_1d import solve

from .manufactured import example_1


@dataclass(frozen=True)
class BenchSettings:
    fast_n: List[int]
    stepping_n: List[int]
    m: int

    @classmethod
    def from_config(cls) -> "BenchSettings":
        section = get_config()["bench"]
        return cls(
            fast_n=[int(n) for n in section["fast_n"]],
            stepping_n=[int(n) for n in section["stepping_n"]],
            m=int(section["m"]),
        )


@dataclass(frozen=True)
class BenchRow:
    backend: str
    n: int
    seconds: float
    # 相对上一行（N 减半）的耗时比，首行为 None
    ratio: Optional[float] = None


@dataclass
class BenchReport:
    m: int
    rows: List[BenchRow] = field(default_factory=list)

    def ratios(self, backend: str) -> List[float]:
        return [row.ratio for row in self.rows if row.backend == backend and row.ratio is not None]


def time_backend(backend: str, sizes: Sequence[int], m: int, alpha1: float = 0.5, alpha2: float = 1.5) -> List[BenchRow]:
    """在 example_1 上逐个 N 计时"""
    problem = example_1(alpha1, alpha2).problem
    rows: List[BenchRow] = []
    for n in sizes:
        grid = problem.grid(n, m)
        started = time.perf_counter()
        solve(problem, grid, backend)
        seconds = time.perf_counter() - started
        ratio = seconds / rows[-1].seconds if rows and rows[-1].seconds > 0 else None
        rows.append(BenchRow(backend=backend, n=n, seconds=seconds, ratio=ratio))
    return rows


def run_benchmark(settings: Optional[BenchSettings] = None) -> BenchReport:
    if settings is None:
        settings = BenchSettings.from_config()
    report = BenchReport(m=settings.m)
    report.rows.extend(time_backend("fast", settings.fast_n, settings.m))
    report.rows.extend(time_backend("stepping", settings.stepping_n, settings.m))
    return report


def format_bench(report: BenchReport) -> str:
    lines = [f"{'backend':<10s} {'N':>8s} {'seconds':>10s} {'ratio':>7s}", "-" * 38]
    for row in report.rows:
        ratio = "--" if row.ratio is None else f"{row.ratio:.2f}"
        lines.append(f"{row.backend:<10s} {row.n:>8d} {row.seconds:>10.4f} {ratio:>7s}")
    return "\n".join(lines)
