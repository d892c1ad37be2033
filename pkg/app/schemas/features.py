"""
@FileName: features.py
@DateTime: 2025/07/11
@Docs: 特征向量与标准化参数
"""

import numpy as np
from pydantic import Field, field_validator, model_validator

from app.schemas.base import ArraySchema

FEATURE_NAMES: tuple[str, ...] = (
    "mean",
    "std",
    "range",
    "rms",
    "skewness",
    "kurtosis",
    "mad",
    "zero_crossings",
    "dominant_frequency",
    "spectral_entropy",
)


def _as_vector(v: object) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise ValueError("必须是一维向量")
    if not np.all(np.isfinite(arr)):
        raise ValueError("存在非有限值")
    return arr


class FeatureVector(ArraySchema):
    values: np.ndarray
    feature_names: tuple[str, ...] = Field(default=FEATURE_NAMES)

    @field_validator("values", mode="before")
    @classmethod
    def check_values(cls, v: object) -> np.ndarray:
        return _as_vector(v)

    @model_validator(mode="after")
    def check_names(self) -> "FeatureVector":
        if len(self.feature_names) != self.values.size:
            raise ValueError("特征名与特征值数量不一致")
        return self


class Scaler(ArraySchema):
    """z-score 参数；零方差维度 center=0、scale=1，即原样通过"""

    center: np.ndarray
    scale: np.ndarray

    @field_validator("center", "scale", mode="before")
    @classmethod
    def check_arrays(cls, v: object) -> np.ndarray:
        return _as_vector(v)

    @model_validator(mode="after")
    def check_shapes(self) -> "Scaler":
        if self.center.shape != self.scale.shape:
            raise ValueError("center 与 scale 长度不一致")
        if np.any(self.scale <= 0):
            raise ValueError("scale 必须为正")
        return self

    @property
    def dimension(self) -> int:
        return int(self.center.size)

    def transform(self, features: np.ndarray) -> np.ndarray:
        """对单个向量或按行排列的矩阵做标准化"""
        return (np.asarray(features, dtype=float) - self.center) / self.scale
