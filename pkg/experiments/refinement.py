"""
加密收敛实验
按时间步数 / 空间剖分数 / 分布阶 J 加密，记录误差、收敛阶与耗时
"""
import dataclasses
import math
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import yaml

from config import get_config
from model.errors import ConfigurationError, RefinementError
from model.problem import GridField, GridField2D
from solver.distributed_order import solve_distributed
from solver.solver_1d import BACKENDS, solve
from solver.solver_2d import solve_2d
from utils.logger import logger

from .manufactured import EXAMPLES, ManufacturedProblem, manufactured_problem


# ======================
# 常量定义
# ======================
REFINE_AXES = ("time", "space", "sigma")
REPORT_FORMATS = ("csv", "markdown", "svg")
# 理论收敛阶: O(τ + h⁴ + σ²)
REFERENCE_SLOPES = {"time": 1.0, "space": 4.0, "sigma": 2.0}


# ======================
# 实验配置
# ======================
@dataclass
class ExperimentConfig:
    """一次加密实验的全部参数"""
    example: str
    backend: str
    refine: str
    resolutions: List[int]
    alpha: float
    beta: float
    nu: float
    fixed_n: int
    fixed_m: int
    fixed_j: int
    output: str
    formats: List[str]
    l2: bool = False

    def __post_init__(self) -> None:
        if self.example not in EXAMPLES:
            raise ConfigurationError(f"未知算例: {self.example}（可选: {', '.join(EXAMPLES)}）")
        if self.backend not in BACKENDS:
            raise ConfigurationError(f"未知求解后端: {self.backend}（可选: {', '.join(BACKENDS)}）")
        if self.refine not in REFINE_AXES:
            raise ConfigurationError(f"未知加密方向: {self.refine}（可选: {', '.join(REFINE_AXES)}）")
        if self.refine == "sigma" and self.example != "ex2":
            raise ConfigurationError("sigma 方向加密只适用于分布阶算例 ex2")
        if isinstance(self.formats, str):
            self.formats = [item.strip() for item in self.formats.split(",") if item.strip()]
        unknown = set(self.formats) - set(REPORT_FORMATS)
        if unknown:
            raise ConfigurationError(f"未知输出格式: {sorted(unknown)}")

        self.resolutions = [int(value) for value in self.resolutions]
        if len(self.resolutions) < 2:
            raise ConfigurationError("加密序列至少需要两个分辨率")
        if any(b <= a for a, b in zip(self.resolutions, self.resolutions[1:])):
            raise ConfigurationError(f"加密序列必须严格递增: {self.resolutions}")

    @classmethod
    def from_config(cls, overrides: Optional[Dict[str, Any]] = None) -> "ExperimentConfig":
        """
        从配置文件的 experiment 段加载

        overrides 中值为 None 的键被忽略（命令行未指定）。
        """
        section = dict(get_config()["experiment"])
        for key, value in (overrides or {}).items():
            if value is not None:
                section[key] = value
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(section) - names
        if unknown:
            raise ConfigurationError(f"实验配置包含未知字段: {sorted(unknown)}")
        return cls(**section)

    @classmethod
    def from_file(cls, path: str, overrides: Optional[Dict[str, Any]] = None) -> "ExperimentConfig":
        """读取 JSON（或 YAML）实验文件，命令行参数优先"""
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigurationError(f"实验文件格式错误 ({path}): {e}")
        if not isinstance(data, dict):
            raise ConfigurationError(f"实验文件顶层必须是对象 ({path})")
        data.update({key: value for key, value in (overrides or {}).items() if value is not None})
        return cls.from_config(data)

    def problem_params(self) -> Dict[str, Any]:
        """传给算例构造函数的参数"""
        if self.example == "ex2":
            return {"j": self.fixed_j}
        if self.example == "low_reg":
            return {"nu": self.nu, "alpha1": self.alpha, "alpha2": self.beta}
        return {"alpha1": self.alpha, "alpha2": self.beta}

    def label(self) -> str:
        if self.example == "ex2":
            return f"{self.example}_{self.refine}"
        if self.example == "low_reg":
            return f"{self.example}_a{self.alpha:g}_b{self.beta:g}_nu{self.nu:g}_{self.refine}"
        return f"{self.example}_a{self.alpha:g}_b{self.beta:g}_{self.refine}"


# ======================
# 收敛报告
# ======================
@dataclass(frozen=True)
class ConvergenceRow:
    """一个加密层的结果；第一行的 order 为 NaN"""
    resolution: int
    step: float
    error: float
    order: float
    seconds: float
    l2_error: Optional[float] = None


@dataclass
class ConvergenceReport:
    """加密序列的误差表"""
    example: str
    refine: str
    backend: str
    label: str
    rows: List[ConvergenceRow] = field(default_factory=list)

    @property
    def reference_slope(self) -> float:
        return REFERENCE_SLOPES[self.refine]

    @property
    def orders(self) -> List[float]:
        return [row.order for row in self.rows[1:]]


def observed_order(error_prev: float, error_cur: float, step_prev: float, step_cur: float) -> float:
    """log(E_{k-1}/E_k)/log(r_{k-1}/r_k)；任一误差为 0 时返回 NaN"""
    if not error_prev > 0 or not error_cur > 0:
        return float("nan")
    return math.log(error_prev / error_cur) / math.log(step_prev / step_cur)


# ======================
# 误差计算
# ======================
def max_error(field_: GridField | GridField2D, mp: ManufacturedProblem) -> float:
    """t_N 时刻内点上的最大误差"""
    return float(np.max(np.abs(_final_error(field_, mp))))


def l2_error(field_: GridField | GridField2D, mp: ManufacturedProblem) -> float:
    """t_N 时刻的离散 L² 误差 (h Σ e²)^{1/2}"""
    error = _final_error(field_, mp)
    if isinstance(field_, GridField2D):
        cell = field_.grid.space.h1 * field_.grid.space.h2
    else:
        cell = field_.grid.space.h
    return float(math.sqrt(cell * np.sum(error ** 2)))


def _final_error(field_: GridField | GridField2D, mp: ManufacturedProblem) -> np.ndarray:
    horizon = field_.grid.time.horizon
    if isinstance(field_, GridField2D):
        x, y = field_.grid.space.grid()
        exact = mp.exact(x, y, horizon)
        return (field_.final - exact)[1:-1, 1:-1]
    exact = mp.exact(field_.grid.space.nodes, horizon)
    return (field_.final - exact)[1:-1]


# ======================
# 加密实验
# ======================
def _solve_level(mp: ManufacturedProblem, config: ExperimentConfig, n: int, m: int, j: int):
    problem = mp.problem
    if mp.dimension == 2:
        return solve_2d(problem, problem.grid(n, m, m), config.backend)
    grid = problem.grid(n, m)
    if mp.distribution is not None:
        distribution = dataclasses.replace(mp.distribution, j=j)
        return solve_distributed(distribution, problem, grid, config.backend)
    return solve(problem, grid, config.backend)


def _level_sizes(config: ExperimentConfig, resolution: int) -> tuple:
    n, m, j = config.fixed_n, config.fixed_m, config.fixed_j
    if config.refine == "time":
        n = resolution
    elif config.refine == "space":
        m = resolution
    else:
        j = resolution
    return n, m, j


def _level_step(mp: ManufacturedProblem, config: ExperimentConfig, n: int, m: int, j: int) -> float:
    problem = mp.problem
    if config.refine == "time":
        return problem.horizon / n
    if config.refine == "space":
        length = problem.length_x if mp.dimension == 2 else problem.length
        return length / m
    return dataclasses.replace(mp.distribution, j=j).sigma


def run_refinement(config: ExperimentConfig) -> ConvergenceReport:
    """
    对每个分辨率求解并记录 t_N 时刻的最大误差

    各层顺序执行；求解失败时抛出带行上下文的 RefinementError。
    """
    mp = manufactured_problem(config.example, **config.problem_params())
    report = ConvergenceReport(
        example=config.example,
        refine=config.refine,
        backend=config.backend,
        label=config.label(),
    )
    logger.info(f"开始加密实验: {report.label}, 后端={config.backend}, 序列={config.resolutions}")

    previous: Optional[ConvergenceRow] = None
    for resolution in config.resolutions:
        n, m, j = _level_sizes(config, resolution)
        started = time.perf_counter()
        try:
            field_ = _solve_level(mp, config, n, m, j)
        except Exception as e:
            raise RefinementError(
                f"{config.example} 在 {config.refine}={resolution} 层求解失败: {e}",
                example=config.example,
                axis=config.refine,
                resolution=resolution,
            ) from e
        seconds = time.perf_counter() - started

        step = _level_step(mp, config, n, m, j)
        error = max_error(field_, mp)
        order = float("nan") if previous is None else observed_order(previous.error, error, previous.step, step)
        row = ConvergenceRow(
            resolution=resolution,
            step=step,
            error=error,
            order=order,
            seconds=seconds,
            l2_error=l2_error(field_, mp) if config.l2 else None,
        )
        report.rows.append(row)
        previous = row
        logger.info(f"  {config.refine}={resolution}: E={error:.4e}, order={order:.4f}, {seconds:.3f}s")

    return report
