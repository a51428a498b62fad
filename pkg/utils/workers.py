"""
工作池工具
把互不相关的模态系统按连续区间切块，分发到线程池执行
"""
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, TypeVar

from config import get_config
from utils.logger import logger


T = TypeVar("T")

# 环境变量：限制工作池规模（基准测试时保证可复现）
MAX_WORKERS_ENV = "FRACDW_MAX_WORKERS"


@dataclass
class WorkerSettings:
    """工作池参数"""
    max_workers: int
    chunk_size: int

    @classmethod
    def from_config(cls) -> "WorkerSettings":
        """从配置文件加载；环境变量 FRACDW_MAX_WORKERS 优先"""
        workers = get_config()["workers"]
        return cls(
            max_workers=resolve_max_workers(workers.get("max_workers")),
            chunk_size=max(1, int(workers["chunk_size"])),
        )


def resolve_max_workers(configured: Optional[int] = None) -> int:
    """
    解析工作池大小

    优先级: 环境变量 > 配置值 > os.cpu_count()
    """
    env_value = os.environ.get(MAX_WORKERS_ENV)
    if env_value:
        try:
            return max(1, int(env_value))
        except ValueError:
            logger.warning(f"{MAX_WORKERS_ENV}={env_value!r} 不是整数，已忽略")
    if configured:
        return max(1, int(configured))
    return os.cpu_count() or 1


def map_chunks(
    func: Callable[[slice], T],
    n_items: int,
    settings: Optional[WorkerSettings] = None,
) -> List[T]:
    """
    把 [0, n_items) 切成连续区间，对每个区间调用 func(slice)

    结果按区间顺序返回，与线程调度无关。只有一个区间或一个线程时直接串行执行。
    """
    if settings is None:
        settings = WorkerSettings.from_config()

    chunks = [
        slice(start, min(start + settings.chunk_size, n_items))
        for start in range(0, n_items, settings.chunk_size)
    ]
    if len(chunks) <= 1 or settings.max_workers <= 1:
        return [func(chunk) for chunk in chunks]

    workers = min(settings.max_workers, len(chunks))
    logger.debug(f"工作池: {len(chunks)} 个区间, {workers} 个线程")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, chunks))
