"""
@FileName: ris.py
@DateTime: 2025/07/09
@Docs: 透射式RIS级联接收功率、相位优化与量化、波束扫描
"""

import math
from collections.abc import Sequence

import numpy as np

from app.core.exceptions import (
    DegenerateGeometryException,
    DimensionMismatchException,
    DomainException,
    ValidationException,
)
from app.schemas.propagation import LinkBudgetConfig
from app.schemas.ris import TWO_PI, CascadeGeometry, Codeword, PhaseProfile, RisArray, ScanEntry, ScanReport
from app.services.propagation import (
    MEASURED_RIS_GAIN_DB,
    MEASURED_RX_WITH_RIS_DBM,
    MEASURED_RX_WITHOUT_RIS_DBM,
    friis_term,
    obstruction_attenuation,
    receiver_power,
    wavelength,
)
from app.utils.batch_operations import BatchProcessor
from app.utils.logger import logger

# 穷举搜索允许的最大阵元数
EXHAUSTIVE_MAX_ELEMENTS = 20
_EXHAUSTIVE_CHUNK = 4096
_MIN_DISTANCE = 1e-12


def _wrap_phase(phases: np.ndarray) -> np.ndarray:
    """折叠到 [0, 2π)，消除 mod 舍入得到的 2π"""
    wrapped = np.mod(phases, TWO_PI)
    wrapped[wrapped >= TWO_PI] = 0.0
    return wrapped


def plane_basis(ris: RisArray) -> tuple[np.ndarray, np.ndarray]:
    """RIS 平面内的正交基 (u 沿列方向, v 沿行方向)"""
    normal = np.asarray(ris.orientation, dtype=float)
    up = np.array([0.0, 0.0, 1.0])
    if abs(float(np.dot(normal, up))) > 0.99:
        up = np.array([0.0, 1.0, 0.0])
    u = np.cross(up, normal)
    u /= np.linalg.norm(u)
    v = np.cross(normal, u)
    return u, v


def element_positions(ris: RisArray) -> np.ndarray:
    """阵元中心坐标，形状 (rows·cols, 3)，按行优先排列"""
    u, v = plane_basis(ris)
    center = np.asarray(ris.center_position, dtype=float)
    col_offsets = (np.arange(ris.cols) - (ris.cols - 1) / 2.0) * ris.element_spacing
    row_offsets = (np.arange(ris.rows) - (ris.rows - 1) / 2.0) * ris.element_spacing
    rr, cc = np.meshgrid(row_offsets, col_offsets, indexing="ij")
    return center + cc.reshape(-1, 1) * u + rr.reshape(-1, 1) * v


def _leg_distances(geometry: CascadeGeometry) -> tuple[np.ndarray, np.ndarray]:
    positions = element_positions(geometry.ris)
    d1 = np.linalg.norm(positions - np.asarray(geometry.tx_position, dtype=float), axis=1)
    d2 = np.linalg.norm(positions - np.asarray(geometry.rx_position, dtype=float), axis=1)
    if np.any(d1 <= _MIN_DISTANCE) or np.any(d2 <= _MIN_DISTANCE):
        raise DegenerateGeometryException("Tx/Rx 与阵元位置重合")
    return d1, d2


def element_gain(ris: RisArray, frequency: float) -> float:
    """阵元等效口径增益 4π·s²/λ²"""
    lam = wavelength(frequency)
    return 4.0 * math.pi * ris.element_spacing**2 / lam**2


def _cascade_terms(geometry: CascadeGeometry, config: LinkBudgetConfig) -> tuple[np.ndarray, np.ndarray]:
    """每个阵元的级联幅度与总路程"""
    lam = wavelength(config.frequency)
    d1, d2 = _leg_distances(geometry)
    wall = 10.0 ** (-obstruction_attenuation(geometry.tx_side_obstructions) / 20.0)
    gain = element_gain(geometry.ris, config.frequency)
    amplitude = (lam / (4.0 * math.pi * d1)) * (lam / (4.0 * math.pi * d2)) * gain
    return amplitude * wall, d1 + d2


def _wavenumber(config: LinkBudgetConfig) -> float:
    return TWO_PI / wavelength(config.frequency)


def _base_budget(config: LinkBudgetConfig) -> float:
    return config.tx_power + config.amplifier_gain + config.tx_gain + config.rx_gain - config.cable_loss


def _field_to_dbm(field: complex, config: LinkBudgetConfig) -> float:
    magnitude = max(abs(field), np.finfo(float).tiny)
    return _base_budget(config) + 20.0 * math.log10(magnitude)


def _check_profile(geometry: CascadeGeometry, profile: PhaseProfile) -> None:
    expected = (geometry.ris.rows, geometry.ris.cols)
    if profile.shape != expected:
        raise DimensionMismatchException(
            "相位配置尺寸与阵列不一致",
            detail={"expected": list(expected), "actual": list(profile.shape)},
        )


def received_power_with_ris(geometry: CascadeGeometry, profile: PhaseProfile, config: LinkBudgetConfig) -> float:
    """Tx → RIS → Rx 的相干叠加接收功率 (dBm)

    每个阵元的贡献为 (λ/4πd₁)(λ/4πd₂)·G_e·e^{j(φ−k(d₁+d₂))}，发射侧遮挡按幅度计入。

    Raises:
        DimensionMismatchException: 相位矩阵尺寸不符
        DegenerateGeometryException: 存在零距离
    """
    _check_profile(geometry, profile)
    amplitude, path = _cascade_terms(geometry, config)
    k = _wavenumber(config)
    field = np.sum(amplitude * np.exp(1j * (profile.phases.reshape(-1) - k * path)))
    return _field_to_dbm(complex(field), config)


def single_element_cascade(geometry: CascadeGeometry, config: LinkBudgetConfig) -> float:
    """单阵元级联的两段 Friis 参考功率 (dBm)，以阵列中心为阵元位置"""
    center = np.asarray(geometry.ris.center_position, dtype=float)
    d1 = float(np.linalg.norm(center - np.asarray(geometry.tx_position, dtype=float)))
    d2 = float(np.linalg.norm(center - np.asarray(geometry.rx_position, dtype=float)))
    if d1 <= _MIN_DISTANCE or d2 <= _MIN_DISTANCE:
        raise DegenerateGeometryException("Tx/Rx 与阵列中心重合")
    return (
        _base_budget(config)
        + friis_term(config.frequency, d1)
        + friis_term(config.frequency, d2)
        + 20.0 * math.log10(element_gain(geometry.ris, config.frequency))
        - obstruction_attenuation(geometry.tx_side_obstructions)
    )


def direct_path_power(geometry: CascadeGeometry, config: LinkBudgetConfig) -> float:
    """不经 RIS 的直达路径功率，遮挡同样计入"""
    distance = float(np.linalg.norm(np.asarray(geometry.rx_position) - np.asarray(geometry.tx_position)))
    direct = config.model_copy(update={"distance": distance})
    return receiver_power(direct, geometry.tx_side_obstructions)


def ideal_phase_profile(geometry: CascadeGeometry, config: LinkBudgetConfig) -> PhaseProfile:
    """连续理想相位：各阵元贡献在 Rx 处同相，首个阵元相位归零"""
    _, path = _cascade_terms(geometry, config)
    k = _wavenumber(config)
    phases = _wrap_phase(k * (path - path[0]))
    return PhaseProfile(phases=phases.reshape(geometry.ris.rows, geometry.ris.cols))


def quantize_profile(profile: PhaseProfile, bits: int) -> PhaseProfile:
    """就近量化到 2^bits 个均匀电平，恰在中点时取较低电平"""
    if bits < 1:
        raise DomainException("量化比特数必须不小于 1", detail={"bits": bits})
    levels = 2**bits
    step = TWO_PI / levels
    scaled = profile.phases / step
    lower = np.floor(scaled)
    index = np.where(scaled - lower <= 0.5, lower, lower + 1).astype(np.int64) % levels
    return PhaseProfile(phases=index * step, quantization_bits=bits)


def _binary_to_profile(signs: np.ndarray, ris: RisArray) -> PhaseProfile:
    phases = np.where(signs > 0, 0.0, math.pi).reshape(ris.rows, ris.cols)
    return PhaseProfile(phases=phases, quantization_bits=1)


def _element_phasors(geometry: CascadeGeometry, config: LinkBudgetConfig) -> np.ndarray:
    amplitude, path = _cascade_terms(geometry, config)
    return amplitude * np.exp(-1j * _wavenumber(config) * path)


def optimize_binary_profile(geometry: CascadeGeometry, config: LinkBudgetConfig) -> PhaseProfile:
    """全局最优 1 比特配置（排序角度扫描）

    最优解形如 x_m = sign(cos(θ_m − ψ))。ψ 扫过 2N 个临界角 θ_m ± π/2，
    每越过一个临界角只翻转一个阵元，逐步更新和并保留模值最大的状态。
    """
    phasors = _element_phasors(geometry, config)
    theta = np.angle(phasors)

    events = np.mod(np.concatenate([theta + math.pi / 2, theta - math.pi / 2]), TWO_PI)
    owners = np.concatenate([np.arange(theta.size), np.arange(theta.size)])
    order = np.argsort(events, kind="stable")
    events, owners = events[order], owners[order]

    # 起点取首尾临界角之间的环绕间隙中点
    start = np.mod((events[-1] + events[0] + TWO_PI) / 2.0, TWO_PI)
    initial = np.where(np.cos(theta - start) >= 0, 1.0, -1.0)
    signs = initial.copy()
    total = complex(np.sum(signs * phasors))
    best_step, best_magnitude = -1, abs(total)

    for step, m in enumerate(owners):
        total -= 2.0 * signs[m] * phasors[m]
        signs[m] = -signs[m]
        magnitude = abs(total)
        if magnitude > best_magnitude:
            best_step, best_magnitude = step, magnitude

    # 按翻转次数的奇偶一次性还原最优状态
    flips = np.bincount(owners[: best_step + 1], minlength=theta.size)
    best_signs = np.where(flips % 2 == 1, -initial, initial)

    logger.debug(f"1 比特扫描优化完成: {theta.size} 阵元, |S|={abs(np.sum(best_signs * phasors)):.4e}")
    return _binary_to_profile(best_signs, geometry.ris)


def exhaustive_binary_profile(geometry: CascadeGeometry, config: LinkBudgetConfig) -> PhaseProfile:
    """穷举全部 2^N 个 1 比特配置（首阵元固定为 0 相位），仅用于小阵列校验

    Raises:
        DomainException: 阵元数超过 EXHAUSTIVE_MAX_ELEMENTS
    """
    phasors = _element_phasors(geometry, config)
    n = phasors.size
    if n > EXHAUSTIVE_MAX_ELEMENTS:
        raise DomainException("阵元数过多，无法穷举", detail={"elements": n, "limit": EXHAUSTIVE_MAX_ELEMENTS})
    if n == 1:
        return _binary_to_profile(np.ones(1), geometry.ris)

    free = n - 1
    shifts = np.arange(free, dtype=np.int64)
    best_index, best_magnitude = 0, -1.0
    for start in range(0, 2**free, _EXHAUSTIVE_CHUNK):
        index = np.arange(start, min(start + _EXHAUSTIVE_CHUNK, 2**free), dtype=np.int64)
        signs = 1.0 - 2.0 * ((index[:, None] >> shifts) & 1)
        magnitude = np.abs(phasors[0] + signs @ phasors[1:])
        local = int(np.argmax(magnitude))
        if magnitude[local] > best_magnitude:
            best_magnitude = float(magnitude[local])
            best_index = int(index[local])

    signs = np.concatenate([[1.0], 1.0 - 2.0 * ((best_index >> shifts) & 1)])
    return _binary_to_profile(signs, geometry.ris)


def forward_normal(geometry: CascadeGeometry) -> np.ndarray:
    """指向接收侧的法向量"""
    normal = np.asarray(geometry.ris.orientation, dtype=float)
    center = np.asarray(geometry.ris.center_position, dtype=float)
    if float(np.dot(np.asarray(geometry.rx_position) - center, normal)) > 0:
        return normal
    return -normal


def steering_direction(geometry: CascadeGeometry, azimuth_deg: float, elevation_deg: float) -> np.ndarray:
    """方位角/俯仰角（相对接收侧法向）对应的单位方向"""
    u, v = plane_basis(geometry.ris)
    az, el = math.radians(azimuth_deg), math.radians(elevation_deg)
    f = forward_normal(geometry)
    return math.cos(el) * math.cos(az) * f + math.cos(el) * math.sin(az) * u + math.sin(el) * v


def steering_profile(
    geometry: CascadeGeometry,
    config: LinkBudgetConfig,
    azimuth_deg: float,
    elevation_deg: float,
    bits: int | None = 1,
) -> PhaseProfile:
    """补偿球面入射波并把透射波束指向给定方向，bits 为 None 时不量化"""
    positions = element_positions(geometry.ris)
    center = np.asarray(geometry.ris.center_position, dtype=float)
    k = _wavenumber(config)
    incident = np.linalg.norm(positions - np.asarray(geometry.tx_position, dtype=float), axis=1)
    direction = steering_direction(geometry, azimuth_deg, elevation_deg)
    phases = _wrap_phase(k * incident - k * ((positions - center) @ direction))
    profile = PhaseProfile(phases=phases.reshape(geometry.ris.rows, geometry.ris.cols))
    return profile if bits is None else quantize_profile(profile, bits)


def default_codebook(
    azimuth_span_deg: float = 60.0, elevation_span_deg: float = 60.0, step_deg: float = 5.0
) -> list[Codeword]:
    """均匀方位/俯仰网格，方位为外层循环"""
    if step_deg <= 0:
        raise DomainException("扫描步长必须为正", detail={"step_deg": step_deg})

    def axis(span: float) -> np.ndarray:
        count = int(math.floor(2 * span / step_deg + 1e-9)) + 1
        return np.round(-span + step_deg * np.arange(count), 9)

    return [
        Codeword(azimuth_deg=float(az), elevation_deg=float(el))
        for az in axis(azimuth_span_deg)
        for el in axis(elevation_span_deg)
    ]


def beam_scan(
    geometry: CascadeGeometry,
    config: LinkBudgetConfig,
    codebook: Sequence[Codeword],
    bits: int = 1,
    processor: BatchProcessor | None = None,
) -> tuple[ScanReport, PhaseProfile]:
    """逐码字计算接收功率并选出最佳码字

    Returns:
        (扫描报告, 最佳码字对应的相位配置)

    Raises:
        ValidationException: 码本为空
    """
    if not codebook:
        raise ValidationException("码本不能为空")
    processor = processor or BatchProcessor()

    def evaluate(word: Codeword) -> float:
        profile = steering_profile(geometry, config, word.azimuth_deg, word.elevation_deg, bits)
        return received_power_with_ris(geometry, profile, config)

    powers = processor.map_ordered(evaluate, list(codebook), description="码字扫描")
    best = int(np.argmax(powers))
    best_word = codebook[best]
    best_profile = steering_profile(geometry, config, best_word.azimuth_deg, best_word.elevation_deg, bits)
    direct = direct_path_power(geometry, config)
    logger.info(
        f"波束扫描完成: {len(codebook)} 个码字, 最佳 az={best_word.azimuth_deg} el={best_word.elevation_deg} "
        f"功率 {powers[best]:.2f} dBm, 相对直达路径 {powers[best] - direct:+.2f} dB"
    )

    report = ScanReport(
        rows=geometry.ris.rows,
        cols=geometry.ris.cols,
        bits=bits,
        element_spacing_m=geometry.ris.element_spacing,
        entries=[
            ScanEntry(azimuth_deg=w.azimuth_deg, elevation_deg=w.elevation_deg, power_dbm=p)
            for w, p in zip(codebook, powers, strict=True)
        ],
        argmax_index=best,
        best_azimuth_deg=best_word.azimuth_deg,
        best_elevation_deg=best_word.elevation_deg,
        best_power_dbm=powers[best],
        direct_path_power_dbm=direct,
        ris_gain_db=powers[best] - direct,
        single_element_power_dbm=single_element_cascade(geometry, config),
        ideal_power_dbm=received_power_with_ris(geometry, ideal_phase_profile(geometry, config), config),
        optimal_binary_power_dbm=received_power_with_ris(geometry, optimize_binary_profile(geometry, config), config),
        measured_reference={
            "measured_rx_without_ris_dbm": MEASURED_RX_WITHOUT_RIS_DBM,
            "measured_rx_with_ris_dbm": MEASURED_RX_WITH_RIS_DBM,
            "measured_ris_gain_db": MEASURED_RIS_GAIN_DB,
        },
    )
    return report, best_profile
