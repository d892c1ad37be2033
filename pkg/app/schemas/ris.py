"""
@FileName: ris.py
@DateTime: 2025/07/09
@Docs: 透射式RIS阵列、相位配置与级联几何的Pydantic模型
"""

import math

import numpy as np
from pydantic import Field, field_validator, model_validator

from app.schemas.base import ArraySchema, BaseSchema
from app.schemas.propagation import Obstruction
from app.schemas.types import Db, Dbm, Hertz, Meters, Vector3

TWO_PI = 2.0 * math.pi


class RisArray(BaseSchema):
    """均匀平面阵列形式的RIS"""

    rows: int = Field(ge=1, description="行数")
    cols: int = Field(ge=1, description="列数")
    element_spacing: Meters = Field(gt=0, description="阵元间距")
    design_frequency: Hertz = Field(gt=0, description="设计频率")
    center_position: Vector3 = Field(description="阵列中心")
    orientation: Vector3 = Field(description="单位法向量")

    @field_validator("orientation")
    @classmethod
    def check_unit_normal(cls, v: Vector3) -> Vector3:
        """法向量模长为 1（误差 1e-9）"""
        norm = math.sqrt(sum(c * c for c in v))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"orientation 必须为单位向量，当前模长 {norm}")
        return v

    @property
    def element_count(self) -> int:
        return self.rows * self.cols


class PhaseProfile(ArraySchema):
    """每个阵元的相位状态，quantization_bits 为 None 表示连续相位"""

    phases: np.ndarray = Field(description="rows×cols 相位矩阵（弧度）")
    quantization_bits: int | None = Field(default=None, ge=1)

    @field_validator("phases", mode="before")
    @classmethod
    def check_phases(cls, v: object) -> np.ndarray:
        """二维实数矩阵，取值位于 [0, 2π)"""
        arr = np.asarray(v, dtype=float)
        if arr.ndim != 2:
            raise ValueError("phases 必须是二维矩阵")
        if np.any(arr < 0) or np.any(arr >= TWO_PI):
            raise ValueError("phases 取值必须位于 [0, 2π)")
        return arr

    @model_validator(mode="after")
    def check_binary_levels(self) -> "PhaseProfile":
        """1 比特配置只允许 0 与 π"""
        if self.quantization_bits == 1 and not np.all((self.phases == 0.0) | (self.phases == math.pi)):
            raise ValueError("1 比特相位配置只能取 0 或 π")
        return self

    @property
    def shape(self) -> tuple[int, int]:
        return int(self.phases.shape[0]), int(self.phases.shape[1])

    @property
    def is_continuous(self) -> bool:
        return self.quantization_bits is None


class CascadeGeometry(BaseSchema):
    """发射机 → (墙) → RIS → 接收机 的几何布局"""

    tx_position: Vector3
    rx_position: Vector3
    ris: RisArray
    tx_side_obstructions: list[Obstruction] = Field(default_factory=list, description="发射侧遮挡")

    @model_validator(mode="after")
    def check_transmissive_sides(self) -> "CascadeGeometry":
        """透射工作方式：Tx 与 Rx 位于RIS平面两侧"""
        center = np.asarray(self.ris.center_position)
        normal = np.asarray(self.ris.orientation)
        tx_side = float(np.dot(np.asarray(self.tx_position) - center, normal))
        rx_side = float(np.dot(np.asarray(self.rx_position) - center, normal))
        if tx_side * rx_side >= 0:
            raise ValueError("Tx 与 Rx 必须位于RIS平面两侧")
        return self


class Codeword(BaseSchema):
    """波束扫描码字（角度制）"""

    azimuth_deg: float
    elevation_deg: float


class ScanEntry(BaseSchema):
    azimuth_deg: float
    elevation_deg: float
    power_dbm: Dbm


class ScanReport(BaseSchema):
    """波束扫描报告"""

    rows: int
    cols: int
    bits: int
    element_spacing_m: float
    entries: list[ScanEntry]
    argmax_index: int
    best_azimuth_deg: float
    best_elevation_deg: float
    best_power_dbm: Dbm
    direct_path_power_dbm: Dbm = Field(description="无RIS直达路径功率")
    ris_gain_db: Db = Field(description="最佳码字相对直达路径的增益")
    single_element_power_dbm: Dbm
    ideal_power_dbm: Dbm = Field(description="连续理想相位的接收功率")
    optimal_binary_power_dbm: Dbm = Field(description="全局最优 1 比特配置的接收功率")
    measured_reference: dict[str, float] = Field(default_factory=dict, description="仅作文档的实测数值")
