"""
-*- coding: utf-8 -*-
@FileName: config.py
@DateTime: 2025/03/08 04:30:00
@Docs: 应用程序配置管理（进程级 Settings 与运行级 RunConfig）
"""

import hashlib
import json
import math
from functools import lru_cache
from pathlib import Path
from typing import Any, Literal

from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict
from scipy.constants import speed_of_light


class Settings(BaseSettings):
    """应用程序配置类"""

    # 模型配置
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,  # 环境变量区分大小写
        extra="ignore",  # 忽略额外字段
    )

    # 应用配置
    APP_NAME: str = Field(default="ris-wall-har")
    APP_VERSION: str = Field(default="0.1.0")
    APP_DESCRIPTION: str = Field(default="透射式RIS穿墙感知仿真与活动识别工具")

    # 运行环境
    ENVIRONMENT: str = "development"

    @property
    def IS_PRODUCTION(self) -> bool:
        """判断是否为生产环境"""
        return self.ENVIRONMENT.lower() == "production"

    # 项目根目录
    BASE_DIR: Path = Path(__file__).parent.parent.parent

    # 日志配置
    LOG_LEVEL: str = Field(default="INFO")
    LOG_TO_FILE: bool = Field(default=True)
    LOG_DIR: Path | None = Field(default=None)

    @property
    def LOG_PATH(self) -> Path:
        """日志目录，未配置时位于项目根目录下的 logs"""
        return self.LOG_DIR if self.LOG_DIR is not None else self.BASE_DIR / "logs"

    # 监控配置
    ENABLE_METRICS: bool = Field(default=False)
    METRICS_FILENAME: str = Field(default="metrics.prom")

    # 并行配置（1 表示顺序执行）
    MAX_WORKERS: int = Field(default=1, ge=1)

    @property
    def DEFAULT_MATERIAL_DB(self) -> Path:
        """随项目发布的材料数据库"""
        return self.BASE_DIR / "data" / "materials.txt"


@lru_cache
def get_settings() -> Settings:
    """
    获取应用配置的单例实例

    使用 lru_cache 确保配置只从环境变量或 .env 文件加载一次。
    """
    return Settings()


# 创建全局设置实例
settings = get_settings()


# 三维坐标 (x, y, z)
type Vector3 = tuple[float, float, float]


class RunConfig(BaseSettings):
    """单次运行的键值配置

    从 ``key=value`` 文本文件（dotenv 语法，支持 ``#`` 注释）加载，默认值对应实测配置表。
    只读取文件与显式传入的参数，不读取进程环境变量。
    """

    model_config = SettingsConfigDict(
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="forbid",  # 拼写错误的键直接报错
    )

    # 链路预算
    frequency_hz: float = Field(default=5.8e9, gt=0, description="载波频率")
    tx_power_dbm: float = Field(default=17.0, description="发射功率")
    amplifier_gain_db: float = Field(default=14.0, description="功放增益")
    tx_gain_dbi: float = Field(default=15.8, description="发射天线增益")
    rx_gain_dbi: float = Field(default=15.8, description="接收天线增益")
    cable_loss_db: float = Field(default=16.51, ge=0, description="两段线缆总损耗")
    distance_m: float = Field(default=3.8, gt=0, description="收发直线距离")

    # 墙体
    material_db: Path | None = Field(default=None, description="材料数据库文件，缺省使用内置表")
    wall_enabled: bool = Field(default=True)
    wall_material: str = Field(default="concrete")
    wall_thickness_m: float = Field(default=1.1, gt=0)

    # RIS 几何
    ris_rows: int = Field(default=16, ge=1)
    ris_cols: int = Field(default=16, ge=1)
    ris_spacing_preset: Literal["half_wavelength", "footprint"] = Field(default="half_wavelength")
    ris_spacing_m: float | None = Field(default=None, gt=0, description="显式阵元间距，优先于预设")
    ris_design_frequency_hz: float = Field(default=5.8e9, gt=0)
    ris_center: Vector3 = Field(default=(2.3, 0.0, 1.0))
    ris_normal: Vector3 = Field(default=(1.0, 0.0, 0.0))
    tx_position: Vector3 = Field(default=(0.0, 0.0, 1.0))
    rx_position: Vector3 = Field(default=(3.8, 0.0, 1.0))
    ris_bits: int = Field(default=1, ge=1, le=16)

    # 波束扫描码本
    scan_azimuth_span_deg: float = Field(default=60.0, ge=0, le=89)
    scan_elevation_span_deg: float = Field(default=60.0, ge=0, le=89)
    scan_step_deg: float = Field(default=5.0, gt=0)
    export_profile: bool = Field(default=True)

    # CSI 合成
    sampling_rate_hz: float = Field(default=20.0, gt=0)
    trace_duration_s: float = Field(default=10.0, gt=0)
    per_activity_count: int = Field(default=400, ge=1)
    activity_models_file: Path | None = Field(default=None)
    noise_mode: Literal["with_ris", "without_ris", "fixed"] = Field(default="with_ris")
    noise_floor: float | None = Field(default=None, ge=0)
    noise_reference_dbm: float = Field(default=-113.1)
    noise_scale: float = Field(default=1.0, ge=0)
    rx_power_with_ris_dbm: float = Field(default=-87.08)
    rx_power_without_ris_dbm: float = Field(default=-98.78)
    compare_without_ris: bool = Field(default=True)

    # SVM 与评估
    svm_c: float = Field(default=10.0, gt=0)
    svm_kernel: Literal["rbf", "linear"] = Field(default="rbf")
    svm_gamma: float | None = Field(default=None, gt=0, description="缺省按训练集自适应")
    svm_tolerance: float = Field(default=1e-3, gt=0)
    svm_max_passes: int = Field(default=200, ge=1)
    cv_folds: int = Field(default=5, ge=2)
    test_fraction: float = Field(default=0.3, gt=0, lt=1)

    seed: int = Field(default=2024, ge=0)

    # 输出
    output_dir: Path = Field(default=Path("output"))
    dataset_path: Path | None = Field(default=None)
    model_path: Path | None = Field(default=None)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        """只保留显式参数与配置文件两个来源"""
        return init_settings, dotenv_settings

    @field_validator("ris_normal")
    @classmethod
    def normalize_ris_normal(cls, v: Vector3) -> Vector3:
        """法向量归一化"""
        norm = math.sqrt(sum(c * c for c in v))
        if norm == 0.0:
            raise ValueError("ris_normal 不能为零向量")
        return (v[0] / norm, v[1] / norm, v[2] / norm)

    @field_validator("material_db", "activity_models_file")
    @classmethod
    def validate_referenced_file(cls, v: Path | None) -> Path | None:
        """引用的输入文件必须存在"""
        if v is not None and not v.is_file():
            raise ValueError(f"文件不存在: {v}")
        return v

    @model_validator(mode="after")
    def check_noise_mode(self) -> "RunConfig":
        """fixed 模式必须给出噪声幅度"""
        if self.noise_mode == "fixed" and self.noise_floor is None:
            raise ValueError("noise_mode=fixed 时必须配置 noise_floor")
        return self

    @property
    def spacing_m(self) -> float:
        """解析后的阵元间距"""
        if self.ris_spacing_m is not None:
            return self.ris_spacing_m
        if self.ris_spacing_preset == "footprint":
            # 31 cm 口径 / 16 阵元
            return 0.31 / 16
        return speed_of_light / self.ris_design_frequency_hz / 2

    def config_hash(self) -> str:
        """规范化 JSON 的 SHA-256 前 16 位，用于输出溯源"""
        payload = json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def load_run_config(path: Path | None = None, **overrides: Any) -> RunConfig:
    """加载运行配置

    Args:
        path: 配置文件路径，None 表示全部使用默认值
        overrides: 命令行覆盖项（如 seed、output_dir），优先级最高

    Returns:
        RunConfig: 校验后的配置

    Raises:
        ConfigException: 配置文件不存在
    """
    from app.core.exceptions import ConfigException

    if path is not None and not Path(path).is_file():
        raise ConfigException(f"配置文件不存在: {path}")
    cleaned = {k: v for k, v in overrides.items() if v is not None}
    return RunConfig(_env_file=path, **cleaned)  # type: ignore[call-arg]
