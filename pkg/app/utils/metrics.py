"""
@FileName: metrics.py
@DateTime: 2025/07/05
@Docs: 运行指标收集（Prometheus 文本格式导出）
"""

from pathlib import Path

from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, write_to_textfile

from app.core.config import settings


class MetricsCollector:
    """指标收集器"""

    def __init__(self):
        # 独立注册表，避免与全局默认注册表重复注册
        self.registry = CollectorRegistry()
        self.prom_stage_total = Counter("sim_stage_runs_total", "阶段执行次数", ["stage"], registry=self.registry)
        self.prom_stage_errors = Counter("sim_stage_errors_total", "阶段失败次数", ["stage"], registry=self.registry)
        self.prom_stage_latency = Histogram(
            "sim_stage_duration_seconds",
            "阶段耗时（秒）",
            ["stage"],
            buckets=(0.001, 0.01, 0.1, 0.5, 1, 5, 15, 60, 300),
            registry=self.registry,
        )
        self.prom_rx_power = Gauge("sim_rx_power_dbm", "最近一次计算的接收功率", ["kind"], registry=self.registry)
        self.prom_accuracy = Gauge("sim_mean_accuracy", "最近一次评估的平均准确率", ["kind"], registry=self.registry)

    def record_stage(self, stage: str, duration: float, failed: bool = False) -> None:
        """记录阶段指标"""
        self.prom_stage_total.labels(stage).inc()
        self.prom_stage_latency.labels(stage).observe(duration)
        if failed:
            self.prom_stage_errors.labels(stage).inc()

    def set_rx_power(self, kind: str, value_dbm: float) -> None:
        self.prom_rx_power.labels(kind).set(value_dbm)

    def set_accuracy(self, kind: str, value: float) -> None:
        self.prom_accuracy.labels(kind).set(value)

    def write_textfile(self, output_dir: Path) -> Path | None:
        """在开启指标时导出 Prometheus 文本文件"""
        if not settings.ENABLE_METRICS:
            return None
        output_dir.mkdir(parents=True, exist_ok=True)
        path = output_dir / settings.METRICS_FILENAME
        write_to_textfile(str(path), self.registry)
        return path


# 全局指标收集器
metrics_collector = MetricsCollector()
