"""
@FileName: classify.py
@DateTime: 2025/07/12
@Docs: SVM 模型、混淆矩阵与评估报告的Pydantic模型
"""

from typing import Literal

import numpy as np
from pydantic import Field, field_validator, model_validator

from app.schemas.base import ArraySchema, BaseSchema
from app.schemas.features import FEATURE_NAMES, Scaler

# 模型文件格式版本，结构变化时递增
MODEL_FORMAT_VERSION = 1

type KernelKind = Literal["rbf", "linear"]


class SvmHyperparameters(BaseSchema):
    """SVM 训练超参数"""

    C: float = Field(default=10.0, gt=0)
    kernel: KernelKind = Field(default="rbf")
    gamma: float | None = Field(default=None, gt=0, description="缺省按训练集自适应")
    tolerance: float = Field(default=1e-3, gt=0)
    max_passes: int = Field(default=200, ge=1)


class SvmBinaryModel(ArraySchema):
    """二分类 SVM：decision(x) = Σ dual_coef·K(sv, x) + bias"""

    support_vectors: np.ndarray
    dual_coef: np.ndarray = Field(description="αᵢ·yᵢ")
    support_indices: np.ndarray = Field(description="支持向量在训练集中的下标")
    bias: float
    kernel: KernelKind = "rbf"
    gamma: float | None = None
    C: float = Field(gt=0)
    positive_label: str = "+1"
    negative_label: str = "-1"
    converged: bool = True
    iterations: int = 0
    dual_objective: float = 0.0
    objective_history: list[float] = Field(default_factory=list)

    @field_validator("support_vectors", mode="before")
    @classmethod
    def to_matrix(cls, v: object) -> np.ndarray:
        arr = np.asarray(v, dtype=float)
        if arr.ndim != 2:
            raise ValueError("support_vectors 必须是二维矩阵")
        return arr

    @field_validator("dual_coef", mode="before")
    @classmethod
    def to_coef(cls, v: object) -> np.ndarray:
        return np.asarray(v, dtype=float).reshape(-1)

    @field_validator("support_indices", mode="before")
    @classmethod
    def to_indices(cls, v: object) -> np.ndarray:
        return np.asarray(v, dtype=np.int64).reshape(-1)

    @model_validator(mode="after")
    def check_support(self) -> "SvmBinaryModel":
        """至少一个支持向量且 |αy| ≤ C"""
        n = self.support_vectors.shape[0]
        if n == 0:
            raise ValueError("模型至少需要一个支持向量")
        if self.dual_coef.size != n or self.support_indices.size != n:
            raise ValueError("支持向量、对偶系数与下标数量不一致")
        if np.any(np.abs(self.dual_coef) > self.C * (1 + 1e-12)):
            raise ValueError("对偶系数超出 [−C, C]")
        if self.kernel == "rbf" and self.gamma is None:
            raise ValueError("rbf 核必须给出 gamma")
        return self

    @property
    def feature_count(self) -> int:
        return int(self.support_vectors.shape[1])


class SvmMulticlassModel(BaseSchema):
    """一对一多分类 SVM，标准化参数随模型保存"""

    format_version: int = MODEL_FORMAT_VERSION
    class_labels: list[str]
    binary_models: list[SvmBinaryModel]
    scaler: Scaler
    feature_names: tuple[str, ...] = FEATURE_NAMES
    hyperparameters: SvmHyperparameters

    @model_validator(mode="after")
    def check_pairs(self) -> "SvmMulticlassModel":
        """二分类器数量 = L(L−1)/2，标签唯一"""
        n = len(self.class_labels)
        if len(set(self.class_labels)) != n:
            raise ValueError("类别标签重复")
        if len(self.binary_models) != n * (n - 1) // 2:
            raise ValueError(f"{n} 个类别需要 {n * (n - 1) // 2} 个二分类器")
        if len(self.feature_names) != self.scaler.dimension:
            raise ValueError("特征名数量与标准化参数维度不一致")
        return self

    @property
    def pairs(self) -> list[tuple[str, str]]:
        return [(m.positive_label, m.negative_label) for m in self.binary_models]


class ConfusionMatrix(ArraySchema):
    """行为真实类别，列为预测类别"""

    labels: list[str]
    counts: np.ndarray

    @field_validator("counts", mode="before")
    @classmethod
    def to_counts(cls, v: object) -> np.ndarray:
        arr = np.asarray(v, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("混淆矩阵必须是方阵")
        if np.any(arr < 0):
            raise ValueError("计数不能为负")
        return arr

    @model_validator(mode="after")
    def check_labels(self) -> "ConfusionMatrix":
        if len(self.labels) != self.counts.shape[0]:
            raise ValueError("标签数量与矩阵维度不一致")
        return self

    @property
    def total(self) -> int:
        return int(self.counts.sum())


class EvaluationReport(BaseSchema):
    """固定测试集上的评估结果"""

    test_size: int
    confusion: ConfusionMatrix
    per_class_accuracy: dict[str, float] = Field(description="对角元/行和，仅含测试集中出现的类别")
    mean_accuracy: float = Field(description="各类准确率的非加权平均")
    micro_accuracy: float = Field(description="总体正确率")


class CvReport(BaseSchema):
    """分层 k 折交叉验证报告"""

    fold_count: int
    fold_sizes: list[int]
    per_fold_accuracy: list[float]
    mean_accuracy: float = Field(description="各折准确率的算术平均")
    micro_accuracy: float = Field(description="汇总混淆矩阵的总体正确率")
    macro_accuracy: float = Field(description="各类准确率的非加权平均")
    per_class_accuracy: dict[str, float]
    confusion: ConfusionMatrix
    gamma: float | None = None
    all_converged: bool = True
