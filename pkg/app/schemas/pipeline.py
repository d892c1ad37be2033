"""
@FileName: pipeline.py
@DateTime: 2025/07/14
@Docs: 端到端流水线报告
"""

from pydantic import Field

from app.schemas.base import BaseSchema
from app.schemas.classify import CvReport
from app.schemas.propagation import LinkBudgetReport


class NoiseContext(BaseSchema):
    """链路预算与噪声幅度的对应关系"""

    noise_reference_dbm: float
    noise_scale: float
    rx_power_with_ris_dbm: float
    rx_power_without_ris_dbm: float
    noise_floor_with_ris: float
    noise_floor_without_ris: float
    noise_floor_ratio: float = Field(description="有RIS噪声幅度 / 无RIS噪声幅度")


class PipelineReport(BaseSchema):
    """合成 → 特征 → 交叉验证 的汇总报告"""

    noise_mode: str
    noise_floor: float
    trace_count: int
    per_activity_count: int
    activities: list[str]
    link_budget: LinkBudgetReport
    noise: NoiseContext
    cv: CvReport
    without_ris_cv: CvReport | None = None
    accuracy_gain_with_ris: float | None = Field(default=None, description="有RIS与无RIS平均准确率之差")
