"""
@FileName: propagation.py
@DateTime: 2025/07/08
@Docs: 传播模型相关的Pydantic模型
"""

from pydantic import Field, model_validator

from app.schemas.base import BaseSchema
from app.schemas.types import Db, Dbi, Dbm, Hertz, Meters


class LinkBudgetConfig(BaseSchema):
    """分区路径损耗模型的链路预算参数（波长由频率导出，不单独存储）"""

    tx_power: Dbm = Field(description="发射功率 P_T")
    tx_gain: Dbi = Field(description="发射天线增益 G_T")
    rx_gain: Dbi = Field(description="接收天线增益 G_R")
    amplifier_gain: Db = Field(default=0.0, description="功放增益")
    cable_loss: Db = Field(default=0.0, ge=0, description="线缆总损耗（扣除）")
    frequency: Hertz = Field(gt=0, description="载波频率")
    distance: Meters = Field(gt=0, description="收发距离 d")


class Material(BaseSchema):
    """墙体材料电磁参数"""

    name: str = Field(min_length=1, description="材料标识")
    permittivity_real: float = Field(ge=1, description="相对介电常数实部 ε′ᵣ")
    conductivity: float = Field(ge=0, description="电导率 σ (S/m)")
    fitted: bool = Field(default=False, description="ε′ᵣ 是否为反解拟合值")
    permittivity_range: tuple[float, float] | None = Field(default=None, description="文献给出的 ε′ᵣ 区间")

    @model_validator(mode="after")
    def check_range(self) -> "Material":
        """区间上下界有序"""
        if self.permittivity_range is not None:
            lo, hi = self.permittivity_range
            if lo > hi:
                raise ValueError("permittivity_range 下界大于上界")
        return self

    @property
    def within_quoted_range(self) -> bool | None:
        """点值是否落在文献区间内，无区间时返回 None"""
        if self.permittivity_range is None:
            return None
        lo, hi = self.permittivity_range
        return lo <= self.permittivity_real <= hi


class Obstruction(BaseSchema):
    """收发路径上的一处遮挡"""

    material: Material
    thickness: Meters = Field(gt=0, description="厚度")


class LogDistanceModel(BaseSchema):
    """对数距离路径损耗模型"""

    pl_at_d0: Db = Field(description="参考距离处损耗 PL(d₀)")
    reference_distance: Meters = Field(default=1.0, gt=0, description="参考距离 d₀")
    exponent: float = Field(gt=0, description="路径损耗指数 n")


class ObstructionTerm(BaseSchema):
    """报告中的单个遮挡项"""

    material: str
    thickness_m: float
    permittivity_real: float
    conductivity: float
    attenuation_db_per_m: float
    attenuation_db: float


class LinkBudgetReport(BaseSchema):
    """逐项列出的链路预算报告"""

    frequency_hz: float
    wavelength_m: float
    distance_m: float
    tx_power_dbm: float
    amplifier_gain_db: float
    tx_gain_dbi: float
    rx_gain_dbi: float
    cable_loss_db: float
    friis_term_db: float
    free_space_path_loss_db: float
    obstructions: list[ObstructionTerm] = Field(default_factory=list)
    total_obstruction_db: float
    receiver_power_dbm: float
    measured_reference: dict[str, float] = Field(default_factory=dict, description="仅作文档的实测数值")


class AttenuationReport(BaseSchema):
    """材料衰减报告"""

    material: str
    permittivity_real: float
    permittivity_absolute_f_per_m: float
    conductivity: float
    fitted: bool
    permittivity_range: tuple[float, float] | None
    within_quoted_range: bool | None
    thickness_m: float
    attenuation_db_per_m: float
    attenuation_db: float
