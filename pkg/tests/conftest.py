"""
@FileName: conftest.py
@Docs: Pytest 配置文件，提供测试固件 (fixtures)
"""

# 重要提示：这必须在任何应用程序代码导入之前放在最顶部。
import os

os.environ["ENVIRONMENT"] = "testing"
os.environ["LOG_TO_FILE"] = "false"
os.environ["LOG_LEVEL"] = "WARNING"

from pathlib import Path

import numpy as np
import pytest

from app.schemas.propagation import LinkBudgetConfig, Material, Obstruction
from app.schemas.ris import CascadeGeometry, RisArray
from app.services.propagation import wavelength

FREQUENCY = 5.8e9


@pytest.fixture
def link_config() -> LinkBudgetConfig:
    """实测配置表对应的链路预算参数"""
    return LinkBudgetConfig(
        tx_power=17.0,
        tx_gain=15.8,
        rx_gain=15.8,
        amplifier_gain=14.0,
        cable_loss=16.51,
        frequency=FREQUENCY,
        distance=3.8,
    )


@pytest.fixture
def concrete() -> Material:
    return Material(name="concrete", permittivity_real=5.386, conductivity=0.11, fitted=True)


@pytest.fixture
def concrete_wall(concrete: Material) -> Obstruction:
    return Obstruction(material=concrete, thickness=1.1)


def make_ris(
    rows: int = 16,
    cols: int = 16,
    center: tuple[float, float, float] = (2.3, 0.0, 1.0),
    normal: tuple[float, float, float] = (1.0, 0.0, 0.0),
) -> RisArray:
    """半波长间距的方形阵列"""
    return RisArray(
        rows=rows,
        cols=cols,
        element_spacing=wavelength(FREQUENCY) / 2,
        design_frequency=FREQUENCY,
        center_position=center,
        orientation=normal,
    )


@pytest.fixture
def measurement_geometry(concrete_wall: Obstruction) -> CascadeGeometry:
    """Tx 在墙后 (0,0,1)，RIS 位于 x=2.3，Rx 位于 (3.8,0,1)"""
    return CascadeGeometry(
        tx_position=(0.0, 0.0, 1.0),
        rx_position=(3.8, 0.0, 1.0),
        ris=make_ris(),
        tx_side_obstructions=[concrete_wall],
    )


def far_field_geometry(
    azimuth_tx_deg: float, azimuth_rx_deg: float, distance: float = 200.0, rows: int = 16, cols: int = 16
) -> CascadeGeometry:
    """RIS 位于原点、法向 +x，Tx/Rx 分处两侧的水平面远场布局"""
    ris = make_ris(rows, cols, center=(0.0, 0.0, 0.0))
    a_tx, a_rx = np.radians(azimuth_tx_deg), np.radians(azimuth_rx_deg)
    tx = (-distance * float(np.cos(a_tx)), distance * float(np.sin(a_tx)), 0.0)
    rx = (distance * float(np.cos(a_rx)), distance * float(np.sin(a_rx)), 0.0)
    return CascadeGeometry(tx_position=tx, rx_position=rx, ris=ris)


@pytest.fixture
def write_config(tmp_path: Path):
    """写出 key=value 配置文件，返回路径"""

    def _write(name: str = "run.env", **values: object) -> Path:
        lines = ["# 测试配置"]
        for key, value in values.items():
            if isinstance(value, tuple):
                value = "[" + ", ".join(str(v) for v in value) + "]"
            elif isinstance(value, bool):
                value = str(value).lower()
            lines.append(f"{key}={value}")
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write


@pytest.fixture
def ris_factory():
    return make_ris


@pytest.fixture
def far_field():
    return far_field_geometry
