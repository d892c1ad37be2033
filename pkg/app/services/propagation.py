"""
@FileName: propagation.py
@DateTime: 2025/07/08
@Docs: 路径损耗模型与材料衰减，组合为接收功率预测
"""

import math
from collections.abc import Sequence

from scipy.constants import epsilon_0, speed_of_light

from app.core.exceptions import DomainException, InfeasibleException
from app.schemas.propagation import (
    AttenuationReport,
    LinkBudgetConfig,
    LinkBudgetReport,
    LogDistanceModel,
    Material,
    Obstruction,
    ObstructionTerm,
)

# 介质极限下的衰减系数：20·log10(e)/2 · sqrt(μ0/ε0) ≈ 1636
ATTENUATION_COEFFICIENT = 1636.0
VACUUM_PERMITTIVITY = epsilon_0

# 实测值，仅写入报告作对照，不参与计算
MEASURED_WALL_ATTENUATION_DB = 88.26
MEASURED_RX_WITHOUT_RIS_DBM = -98.78
MEASURED_RX_WITH_RIS_DBM = -87.08
MEASURED_RIS_GAIN_DB = 11.7
COMPUTED_RX_WITH_WALL_DBM = -98.52

# 反解 ε′ᵣ 时允许的舍入误差
_UNITY_TOLERANCE = 1e-9


def wavelength(frequency: float) -> float:
    """由频率导出波长 λ = c / f"""
    if frequency <= 0:
        raise DomainException("频率必须为正", detail={"frequency": frequency})
    return speed_of_light / frequency


def friis_term(frequency: float, distance: float) -> float:
    """自由空间增益项 20·log10(λ / 4πd)，单位 dB（通常为负）

    Raises:
        DomainException: 频率或距离非正
    """
    if frequency <= 0 or distance <= 0:
        raise DomainException("频率与距离必须为正", detail={"frequency": frequency, "distance": distance})
    return 20.0 * math.log10(wavelength(frequency) / (4.0 * math.pi * distance))


def free_space_path_loss(frequency: float, distance: float) -> float:
    """自由空间路径损耗（正值 dB）"""
    return -friis_term(frequency, distance)


def log_distance_pl(model: LogDistanceModel, distance: float) -> float:
    """对数距离模型 PL(d₀) + 10·n·log10(d/d₀)"""
    if distance <= 0:
        raise DomainException("距离必须为正", detail={"distance": distance})
    return model.pl_at_d0 + 10.0 * model.exponent * math.log10(distance / model.reference_distance)


def attenuation_per_meter(material: Material) -> float:
    """材料单位厚度衰减 α = 1636·σ/√ε′ᵣ (dB/m)"""
    if material.permittivity_real < 1:
        raise DomainException(
            "相对介电常数实部必须不小于 1",
            detail={"material": material.name, "permittivity_real": material.permittivity_real},
        )
    if material.conductivity < 0:
        raise DomainException("电导率不能为负", detail={"material": material.name})
    return ATTENUATION_COEFFICIENT * material.conductivity / math.sqrt(material.permittivity_real)


def material_attenuation(material: Material, thickness: float) -> float:
    """穿过给定厚度材料的总衰减 (dB)，与厚度严格线性"""
    if thickness <= 0:
        raise DomainException("厚度必须为正", detail={"thickness": thickness})
    return attenuation_per_meter(material) * thickness


def obstruction_attenuation(obstructions: Sequence[Obstruction]) -> float:
    """所有遮挡的衰减之和 (dB)"""
    return sum((material_attenuation(o.material, o.thickness) for o in obstructions), 0.0)


def receiver_power(config: LinkBudgetConfig, obstructions: Sequence[Obstruction] = ()) -> float:
    """分区路径损耗模型下的接收功率 (dBm)

    P_R = P_T + 放大 + G_T + G_R − 线缆 + 20·log10(λ/4πd) − Σ α_i·t_i
    """
    return (
        config.tx_power
        + config.amplifier_gain
        + config.tx_gain
        + config.rx_gain
        - config.cable_loss
        + friis_term(config.frequency, config.distance)
        - obstruction_attenuation(obstructions)
    )


def link_budget_report(config: LinkBudgetConfig, obstructions: Sequence[Obstruction] = ()) -> LinkBudgetReport:
    """逐项列出链路预算各项"""
    terms = [
        ObstructionTerm(
            material=o.material.name,
            thickness_m=o.thickness,
            permittivity_real=o.material.permittivity_real,
            conductivity=o.material.conductivity,
            attenuation_db_per_m=attenuation_per_meter(o.material),
            attenuation_db=material_attenuation(o.material, o.thickness),
        )
        for o in obstructions
    ]
    friis = friis_term(config.frequency, config.distance)
    return LinkBudgetReport(
        frequency_hz=config.frequency,
        wavelength_m=wavelength(config.frequency),
        distance_m=config.distance,
        tx_power_dbm=config.tx_power,
        amplifier_gain_db=config.amplifier_gain,
        tx_gain_dbi=config.tx_gain,
        rx_gain_dbi=config.rx_gain,
        cable_loss_db=config.cable_loss,
        friis_term_db=friis,
        free_space_path_loss_db=-friis,
        obstructions=terms,
        total_obstruction_db=sum((t.attenuation_db for t in terms), 0.0),
        receiver_power_dbm=receiver_power(config, obstructions),
        measured_reference={
            "computed_rx_with_wall_dbm": COMPUTED_RX_WITH_WALL_DBM,
            "measured_wall_attenuation_db": MEASURED_WALL_ATTENUATION_DB,
            "measured_rx_without_ris_dbm": MEASURED_RX_WITHOUT_RIS_DBM,
            "measured_rx_with_ris_dbm": MEASURED_RX_WITH_RIS_DBM,
        },
    )


def attenuation_report(material: Material, thickness: float) -> AttenuationReport:
    """单一材料的衰减报告"""
    return AttenuationReport(
        material=material.name,
        permittivity_real=material.permittivity_real,
        permittivity_absolute_f_per_m=material.permittivity_real * VACUUM_PERMITTIVITY,
        conductivity=material.conductivity,
        fitted=material.fitted,
        permittivity_range=material.permittivity_range,
        within_quoted_range=material.within_quoted_range,
        thickness_m=thickness,
        attenuation_db_per_m=attenuation_per_meter(material),
        attenuation_db=material_attenuation(material, thickness),
    )


def solve_permittivity(target_rx_power: float, config: LinkBudgetConfig, sigma: float, thickness: float) -> float:
    """反解单面墙的 ε′ᵣ，使接收功率恰为目标值

    ε′ᵣ = (1636·σ·t / 所需衰减)²

    Raises:
        DomainException: σ 或厚度非正
        InfeasibleException: 所需衰减非正，或需要 ε′ᵣ < 1
    """
    if sigma <= 0:
        raise DomainException("反解要求电导率为正", detail={"sigma": sigma})
    if thickness <= 0:
        raise DomainException("厚度必须为正", detail={"thickness": thickness})

    required = receiver_power(config) - target_rx_power
    if required <= 0:
        raise InfeasibleException(
            "目标功率不低于无遮挡预算，无需墙体衰减",
            detail={"target_rx_power": target_rx_power, "required_attenuation_db": required},
        )

    permittivity = (ATTENUATION_COEFFICIENT * sigma * thickness / required) ** 2
    if permittivity < 1.0 - _UNITY_TOLERANCE:
        raise InfeasibleException(
            "所需衰减超出 ε′ᵣ ≥ 1 可达范围",
            detail={"required_attenuation_db": required, "permittivity_real": permittivity},
        )
    return max(permittivity, 1.0)
