import sys
import logging
from logging.handlers import TimedRotatingFileHandler
from pathlib import Path

from config import get_config


def get_logger(name: str = "fracdw") -> logging.Logger:
    """
    获取配置好的 logger

    控制台输出到 stdout，文件按天轮转（目录、级别、保留份数取自配置的 logging 段）。
    """
    logger = logging.getLogger(name)

    # 如果已经配置过 handlers，直接返回（避免重复日志）
    if logger.handlers:
        return logger

    log_config = get_config()["logging"]
    level = getattr(logging, str(log_config["level"]).upper(), logging.INFO)
    logger.setLevel(level)

    # 格式器
    formatter = logging.Formatter(
        fmt='[%(asctime)s] [%(levelname)s] [%(name)s] %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # 1. 控制台 Handler
    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setFormatter(formatter)
    console_handler.setLevel(level)
    logger.addHandler(console_handler)

    # 2. 文件 Handler (每天轮转)
    log_dir = Path(log_config["dir"])
    log_dir.mkdir(parents=True, exist_ok=True)
    file_handler = TimedRotatingFileHandler(
        filename=log_dir / log_config["file"],
        when='midnight',
        interval=1,
        backupCount=int(log_config["backup_count"]),
        encoding='utf-8'
    )
    file_handler.setFormatter(formatter)
    file_handler.setLevel(level)
    logger.addHandler(file_handler)

    return logger

# 默认导出
logger = get_logger()
