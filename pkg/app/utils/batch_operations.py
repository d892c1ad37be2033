"""
@FileName: batch_operations.py
@DateTime: 2025/07/08
@Docs: 批量计算工具类，按输入顺序返回结果以保证可复现
"""

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor

from app.core.config import settings
from app.utils.logger import logger


class BatchProcessor:
    """批量处理器，用于码字扫描、一对一训练和交叉验证折等相互独立的计算"""

    def __init__(self, max_workers: int | None = None):
        """
        初始化批量处理器

        Args:
            max_workers: 最大并发数，None 时取 settings.MAX_WORKERS
        """
        self.max_workers = max_workers or settings.MAX_WORKERS

    def map_ordered[T, R](
        self,
        processor: Callable[[T], R],
        data: Sequence[T],
        description: str = "批量处理",
    ) -> list[R]:
        """
        逐项处理数据，结果顺序与输入一致

        Args:
            processor: 处理函数
            data: 待处理的数据
            description: 处理描述，用于日志

        Returns:
            处理结果列表
        """
        if not data:
            return []

        logger.debug(f"开始{description}: 共 {len(data)} 项，并发数 {self.max_workers}")
        if self.max_workers <= 1 or len(data) == 1:
            results = [processor(item) for item in data]
        else:
            # executor.map 保持输入顺序，归约结果与执行顺序无关
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                results = list(executor.map(processor, data))
        logger.debug(f"{description}完成: {len(results)} 项")
        return results
