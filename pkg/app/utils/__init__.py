"""
@FileName: __init__.py
@DateTime: 2025/07/11
@Docs: 日志、指标与批量执行工具
"""

from .batch_operations import BatchProcessor
from .logger import log_stage, logger

__all__ = [
    "BatchProcessor",
    "logger",
    "log_stage",
]
