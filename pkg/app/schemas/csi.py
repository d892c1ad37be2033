"""
@FileName: csi.py
@DateTime: 2025/07/10
@Docs: CSI 幅度序列与活动模型的Pydantic模型
"""

from typing import Literal

import numpy as np
from pydantic import Field, field_validator, model_validator

from app.schemas.base import ArraySchema, BaseSchema
from app.schemas.types import Hertz

# 活动标签，按字母序排列
ACTIVITIES: tuple[str, ...] = ("kicking", "picking_up", "sitting_down", "standing", "standing_up", "walking")

type Activity = Literal["kicking", "picking_up", "sitting_down", "standing", "standing_up", "walking"]
type ModulationKind = Literal["transient_dip", "transient_rise", "quasi_periodic", "low_variance"]


class ActivityModel(BaseSchema):
    """单个活动的合成参数"""

    activity: Activity
    baseline_amplitude: float = Field(default=1.0, gt=0, description="基线幅度")
    modulation_kind: ModulationKind
    modulation_depth: float = Field(ge=0, le=1, description="调制深度（相对基线）")
    modulation_rate: Hertz = Field(default=0.0, ge=0, description="周期调制频率")
    event_duration: float = Field(default=2.0, gt=0, description="瞬态事件持续时间（秒）")
    jitter: float = Field(default=0.1, ge=0, description="深度与事件中心的相对标准差")


class CsiTrace(ArraySchema):
    """一条带标签的 CSI 幅度序列"""

    trace_id: str = Field(min_length=1)
    activity: Activity
    sampling_rate: Hertz = Field(gt=0)
    duration: float = Field(gt=0)
    samples: np.ndarray

    @field_validator("samples", mode="before")
    @classmethod
    def to_array(cls, v: object) -> np.ndarray:
        arr = np.asarray(v, dtype=float)
        if arr.ndim != 1:
            raise ValueError("samples 必须是一维序列")
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise ValueError("幅度必须为非负有限值")
        return arr

    @model_validator(mode="after")
    def check_length(self) -> "CsiTrace":
        """长度 = round(duration × sampling_rate)"""
        expected = round(self.duration * self.sampling_rate)
        if self.samples.size != expected:
            raise ValueError(f"样本数 {self.samples.size} 与 duration×sampling_rate={expected} 不一致")
        return self


class DatasetMetadata(BaseSchema):
    """数据集伴随元数据"""

    sampling_rate_hz: float
    duration_s: float
    per_activity_count: int
    seed: int
    noise_floor: float
    noise_mode: str
    noise_reference_dbm: float | None = None
    rx_power_dbm: float | None = None
    activity_models: list[ActivityModel]
    trace_count: int
