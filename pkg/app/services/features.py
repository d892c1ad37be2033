"""
@FileName: features.py
@DateTime: 2025/07/11
@Docs: CSI 序列的统计与频谱特征提取，以及特征标准化
"""

from collections.abc import Sequence

import numpy as np
from scipy import stats

from app.core.exceptions import DimensionMismatchException, EmptyDatasetException, TraceTooShortException
from app.schemas.csi import CsiTrace
from app.schemas.features import FEATURE_NAMES, FeatureVector, Scaler

MIN_TRACE_LENGTH = 8
# 相对标准差低于此值视为常数
_FLAT_TOLERANCE = 1e-12


def _is_flat(std: float, mean: float) -> bool:
    return std == 0.0 or std <= _FLAT_TOLERANCE * abs(mean)


def extract_features(trace: CsiTrace) -> FeatureVector:
    """提取固定顺序的 10 维特征

    常数序列的偏度、峰度、主频与谱熵约定为 0。

    Raises:
        TraceTooShortException: 样本数少于 8
    """
    x = trace.samples
    if x.size < MIN_TRACE_LENGTH:
        raise TraceTooShortException(
            "特征提取至少需要 8 个样本", detail={"trace_id": trace.trace_id, "length": int(x.size)}
        )

    mean = float(np.mean(x))
    std = float(np.std(x))
    value_range = float(np.ptp(x))
    rms = float(np.sqrt(np.mean(x * x)))
    mad = float(stats.median_abs_deviation(x))

    centered = x - mean
    zero_crossings = float(np.count_nonzero(centered[:-1] * centered[1:] < 0))

    if _is_flat(std, mean):
        skewness = kurtosis = dominant = entropy = 0.0
        zero_crossings = 0.0
    else:
        skewness = float(stats.skew(x, bias=True))
        kurtosis = float(stats.kurtosis(x, fisher=True, bias=True))
        spectrum = np.abs(np.fft.rfft(x))
        freqs = np.fft.rfftfreq(x.size, d=1.0 / trace.sampling_rate)
        dominant = float(freqs[1 + int(np.argmax(spectrum[1:]))]) if spectrum.size > 1 else 0.0
        total = float(np.sum(spectrum))
        entropy = float(stats.entropy(spectrum / total, base=2)) if total > 0 else 0.0

    values = np.array(
        [mean, std, value_range, rms, skewness, kurtosis, mad, zero_crossings, dominant, entropy], dtype=float
    )
    return FeatureVector(values=values, feature_names=FEATURE_NAMES)


def extract_feature_matrix(traces: Sequence[CsiTrace]) -> tuple[np.ndarray, list[str]]:
    """按行堆叠所有序列的特征，返回 (特征矩阵, 活动标签)"""
    if not traces:
        raise EmptyDatasetException("没有可提取特征的序列")
    matrix = np.vstack([extract_features(t).values for t in traces])
    return matrix, [t.activity for t in traces]


def fit_scaler(train_features: np.ndarray) -> Scaler:
    """用训练集拟合 z-score 参数（总体标准差）"""
    train = np.asarray(train_features, dtype=float)
    if train.ndim != 2 or train.shape[0] == 0:
        raise EmptyDatasetException("训练特征为空")
    center = train.mean(axis=0)
    scale = train.std(axis=0)
    flat = np.array([_is_flat(float(s), float(c)) for s, c in zip(scale, center, strict=True)])
    return Scaler(center=np.where(flat, 0.0, center), scale=np.where(flat, 1.0, scale))


def standardize(train_features: np.ndarray, apply_to: np.ndarray | None = None) -> tuple[np.ndarray, Scaler]:
    """拟合训练集参数并作用于 apply_to（缺省为训练集本身）

    Raises:
        EmptyDatasetException: 训练集为空
        DimensionMismatchException: 维度不一致
    """
    scaler = fit_scaler(train_features)
    target = np.asarray(train_features if apply_to is None else apply_to, dtype=float)
    if target.shape[-1] != scaler.dimension:
        raise DimensionMismatchException(
            "特征维度与标准化参数不一致", detail={"expected": scaler.dimension, "actual": int(target.shape[-1])}
        )
    return scaler.transform(target), scaler
