"""
-*- coding: utf-8 -*-
@FileName: logger.py
@DateTime: 2025/03/08 03:51:08
@Docs: 简洁的日志管理模块
"""

import sys
import time
from functools import wraps

from loguru import logger

from app.core.config import settings
from app.utils.metrics import metrics_collector


def setup_logger() -> None:
    """配置日志系统"""
    # 移除默认处理器
    logger.remove()

    # 日志格式
    log_format = (
        "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | "
        "<level>{level: <8}</level> | "
        "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
        "{extra} | <level>{message}</level>"
    )

    # 控制台输出（stderr，stdout 留给命令结果）
    logger.add(
        sys.stderr,
        format=log_format,
        level=settings.LOG_LEVEL,
    )

    if not settings.LOG_TO_FILE:
        return

    log_dir = settings.LOG_PATH
    log_dir.mkdir(parents=True, exist_ok=True)

    # 文件输出 - 所有日志
    logger.add(
        log_dir / "sim_{time:YYYY-MM-DD}.log",
        format=log_format,
        level="DEBUG",
        rotation="00:00",
        retention="30 days",
        compression="zip",
        encoding="utf-8",
    )

    # 文件输出 - 错误日志
    logger.add(
        log_dir / "sim_error_{time:YYYY-MM-DD}.log",
        format=log_format,
        level="ERROR",
        rotation="00:00",
        retention="30 days",
        compression="zip",
        encoding="utf-8",
    )


def log_stage(stage: str):
    """流水线阶段日志装饰器

    绑定 stage 字段，记录开始、完成（含耗时）与失败，并写入指标收集器。

    Args:
        stage: 阶段名称
    """

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            stage_logger = logger.bind(stage=stage)
            stage_logger.debug(f"阶段开始: {func.__name__}")
            start = time.perf_counter()
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                elapsed = time.perf_counter() - start
                metrics_collector.record_stage(stage, elapsed, failed=True)
                stage_logger.error(f"阶段失败: {func.__name__} ({elapsed:.3f}s): {e}")
                raise
            elapsed = time.perf_counter() - start
            metrics_collector.record_stage(stage, elapsed)
            stage_logger.info(f"阶段完成: {func.__name__} ({elapsed:.3f}s)")
            return result

        return wrapper

    return decorator


# 初始化日志系统
setup_logger()

__all__ = ["logger", "log_stage"]
