"""
@FileName: csi_synth.py
@DateTime: 2025/07/10
@Docs: 合成带标签的 CSI 幅度序列，噪声幅度由链路预算决定
"""

import math
from collections.abc import Sequence

import numpy as np

from app.core.exceptions import DomainException, ValidationException
from app.schemas.csi import ActivityModel, CsiTrace
from app.utils.batch_operations import BatchProcessor
from app.utils.logger import logger

DEFAULT_SAMPLING_RATE = 20.0
DEFAULT_DURATION = 10.0
DEFAULT_NOISE_REFERENCE_DBM = -113.1


def default_activity_models() -> list[ActivityModel]:
    """六种活动的默认模型，顺序与 ACTIVITIES 一致"""
    return [
        ActivityModel(activity="kicking", modulation_kind="quasi_periodic", modulation_depth=0.25, modulation_rate=1.0),
        ActivityModel(activity="picking_up", modulation_kind="transient_dip", modulation_depth=0.3, event_duration=1.2),
        ActivityModel(
            activity="sitting_down", modulation_kind="transient_dip", modulation_depth=0.5, event_duration=2.5
        ),
        ActivityModel(activity="standing", modulation_kind="low_variance", modulation_depth=0.02, modulation_rate=0.2),
        ActivityModel(
            activity="standing_up", modulation_kind="transient_rise", modulation_depth=0.45, event_duration=2.0
        ),
        ActivityModel(activity="walking", modulation_kind="quasi_periodic", modulation_depth=0.4, modulation_rate=1.5),
    ]


def link_noise_floor(
    rx_power: float, noise_reference: float = DEFAULT_NOISE_REFERENCE_DBM, scale: float = 1.0
) -> float:
    """噪声幅度 = scale·10^((参考电平 − 接收功率)/20)"""
    return scale * 10.0 ** ((noise_reference - rx_power) / 20.0)


def _hann_event(t: np.ndarray, center: float, width: float) -> np.ndarray:
    window = 0.5 * (1.0 + np.cos(2.0 * math.pi * (t - center) / width))
    return np.where(np.abs(t - center) <= width / 2.0, window, 0.0)


def generate_trace(
    model: ActivityModel,
    duration: float,
    noise_floor: float,
    seed: int,
    sampling_rate: float = DEFAULT_SAMPLING_RATE,
    trace_id: str | None = None,
) -> CsiTrace:
    """生成单条序列：基线 + 活动调制 + 加性高斯噪声，截断到非负

    随机数按固定顺序抽取：深度抖动、相位或事件中心、逐点噪声。

    Raises:
        DomainException: duration 或 noise_floor 越界
        ValidationException: 调制频率不低于奈奎斯特频率
    """
    if duration <= 0 or sampling_rate <= 0:
        raise DomainException("duration 与 sampling_rate 必须为正", detail={"duration": duration})
    if noise_floor < 0:
        raise DomainException("噪声幅度不能为负", detail={"noise_floor": noise_floor})
    if model.modulation_rate >= sampling_rate / 2:
        raise ValidationException(
            "调制频率必须低于奈奎斯特频率",
            detail={"activity": model.activity, "modulation_rate": model.modulation_rate},
        )

    rng = np.random.default_rng(seed)
    n = round(duration * sampling_rate)
    t = np.arange(n) / sampling_rate
    base = model.baseline_amplitude
    depth = float(np.clip(model.modulation_depth * (1.0 + model.jitter * rng.standard_normal()), 0.0, 1.0))

    match model.modulation_kind:
        case "quasi_periodic" | "low_variance":
            phase = rng.uniform(0.0, 2.0 * math.pi)
            signal = base * (1.0 + depth * np.sin(2.0 * math.pi * model.modulation_rate * t + phase))
        case "transient_dip" | "transient_rise":
            half = model.event_duration / 2.0
            center = duration / 2.0 * (1.0 + model.jitter * rng.standard_normal())
            if model.event_duration < duration:
                center = float(np.clip(center, half, duration - half))
            else:
                center = duration / 2.0
            sign = -1.0 if model.modulation_kind == "transient_dip" else 1.0
            signal = base * (1.0 + sign * depth * _hann_event(t, center, model.event_duration))

    samples = np.clip(signal + noise_floor * rng.standard_normal(n), 0.0, None)
    return CsiTrace(
        trace_id=trace_id or f"{model.activity}-0000",
        activity=model.activity,
        sampling_rate=sampling_rate,
        duration=duration,
        samples=samples,
    )


def trace_seed(master_seed: int, activity_index: int, trace_index: int) -> int:
    """由主种子与序号派生单条序列的种子"""
    return int(np.random.SeedSequence([master_seed, activity_index, trace_index]).generate_state(1)[0])


def generate_dataset(
    models: Sequence[ActivityModel],
    per_activity_count: int,
    duration: float,
    noise_floor: float,
    seed: int,
    sampling_rate: float = DEFAULT_SAMPLING_RATE,
    processor: BatchProcessor | None = None,
) -> list[CsiTrace]:
    """每个活动生成 per_activity_count 条序列，编号形如 walking-0007"""
    if per_activity_count < 1:
        raise DomainException("per_activity_count 必须不小于 1", detail={"per_activity_count": per_activity_count})
    labels = [m.activity for m in models]
    if len(set(labels)) != len(labels):
        raise ValidationException("活动模型存在重复标签", detail={"activities": labels})

    jobs = [(a, m, i) for a, m in enumerate(models) for i in range(per_activity_count)]

    def build(job: tuple[int, ActivityModel, int]) -> CsiTrace:
        a, model, i = job
        return generate_trace(
            model,
            duration,
            noise_floor,
            trace_seed(seed, a, i),
            sampling_rate=sampling_rate,
            trace_id=f"{model.activity}-{i:04d}",
        )

    traces = (processor or BatchProcessor()).map_ordered(build, jobs, description="CSI 序列合成")
    logger.info(f"合成数据集: {len(models)} 类 × {per_activity_count} 条, 噪声幅度 {noise_floor:.4f}")
    return traces
