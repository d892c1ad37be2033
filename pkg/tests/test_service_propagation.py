"""
@FileName: test_service_propagation.py
@Docs: 测试路径损耗、材料衰减与链路预算
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.exceptions import ConfigException, DomainException, InfeasibleException, ValidationException
from app.dao.materials import MaterialDAO, parse_material_line
from app.schemas.propagation import LinkBudgetConfig, LogDistanceModel, Material, Obstruction
from app.services import propagation


# --- 自由空间项 ---
def test_friis_term_reference_value():
    """5.8 GHz、3.8 m 的自由空间增益项"""
    assert propagation.friis_term(5.8e9, 3.8) == pytest.approx(-59.31, abs=0.01)
    assert propagation.free_space_path_loss(5.8e9, 3.8) == pytest.approx(59.31, abs=0.01)


def test_friis_term_drops_6db_per_doubling():
    near = propagation.friis_term(2.4e9, 5.0)
    far = propagation.friis_term(2.4e9, 10.0)
    assert near - far == pytest.approx(20 * math.log10(2), abs=1e-9)


@pytest.mark.parametrize("frequency,distance", [(0.0, 1.0), (5.8e9, 0.0), (-1.0, 2.0), (5.8e9, -3.0)])
def test_friis_term_rejects_non_positive(frequency, distance):
    with pytest.raises(DomainException):
        propagation.friis_term(frequency, distance)


def test_log_distance_with_free_space_exponent_matches_fspl():
    model = LogDistanceModel(pl_at_d0=propagation.free_space_path_loss(5.8e9, 1.0), exponent=2.0)
    distances = np.random.default_rng(0).uniform(0.1, 500.0, 1000)
    deviation = max(
        abs(propagation.log_distance_pl(model, float(d)) - propagation.free_space_path_loss(5.8e9, float(d)))
        for d in distances
    )
    assert deviation < 1e-9


# --- 材料衰减 ---
def test_attenuation_per_meter_formula(concrete: Material):
    expected = 1636 * 0.11 / math.sqrt(5.386)
    assert propagation.attenuation_per_meter(concrete) == pytest.approx(expected)


def test_attenuation_is_linear_in_thickness(concrete: Material):
    one = propagation.material_attenuation(concrete, 0.5)
    two = propagation.material_attenuation(concrete, 1.0)
    assert two == pytest.approx(2 * one, rel=1e-12)


def test_lossless_material_has_no_attenuation():
    air = Material(name="air", permittivity_real=1.0, conductivity=0.0)
    assert propagation.material_attenuation(air, 3.0) == 0.0


def test_material_rejects_permittivity_below_one():
    with pytest.raises(ValidationError):
        Material(name="bogus", permittivity_real=0.5, conductivity=0.1)


def test_zero_thickness_rejected(concrete: Material):
    with pytest.raises(DomainException):
        propagation.material_attenuation(concrete, 0.0)


# --- 链路预算 ---
def test_receiver_power_through_concrete_wall(link_config: LinkBudgetConfig, concrete_wall: Obstruction):
    assert propagation.receiver_power(link_config, [concrete_wall]) == pytest.approx(-98.52, abs=0.01)


def test_receiver_power_without_wall(link_config: LinkBudgetConfig):
    assert propagation.receiver_power(link_config) == pytest.approx(-13.22, abs=0.01)


def test_each_obstruction_subtracts_its_attenuation(link_config: LinkBudgetConfig, concrete_wall: Obstruction):
    brick = Obstruction(material=Material(name="brick", permittivity_real=3.75, conductivity=0.038), thickness=0.2)
    single = propagation.receiver_power(link_config, [concrete_wall])
    double = propagation.receiver_power(link_config, [concrete_wall, brick])
    assert single - double == pytest.approx(propagation.material_attenuation(brick.material, 0.2))


def test_link_budget_report_itemizes_terms(link_config: LinkBudgetConfig, concrete_wall: Obstruction):
    report = propagation.link_budget_report(link_config, [concrete_wall])
    assert report.friis_term_db == pytest.approx(-59.31, abs=0.01)
    assert report.free_space_path_loss_db == pytest.approx(-report.friis_term_db)
    assert len(report.obstructions) == 1
    assert report.total_obstruction_db == pytest.approx(report.obstructions[0].attenuation_db)
    recomputed = (
        report.tx_power_dbm
        + report.amplifier_gain_db
        + report.tx_gain_dbi
        + report.rx_gain_dbi
        - report.cable_loss_db
        + report.friis_term_db
        - report.total_obstruction_db
    )
    assert report.receiver_power_dbm == pytest.approx(recomputed)
    assert report.measured_reference["measured_rx_without_ris_dbm"] == -98.78


# --- 介电常数反解 ---
def test_solve_permittivity_recovers_concrete(link_config: LinkBudgetConfig):
    assert propagation.solve_permittivity(-98.52, link_config, 0.11, 1.1) == pytest.approx(5.386, abs=0.01)


def test_solve_permittivity_round_trip(link_config: LinkBudgetConfig):
    """反解得到的 ε′ᵣ 代回后复现目标功率"""
    target = -90.0
    eps = propagation.solve_permittivity(target, link_config, 0.11, 1.1)
    wall = Obstruction(material=Material(name="fit", permittivity_real=eps, conductivity=0.11), thickness=1.1)
    assert propagation.receiver_power(link_config, [wall]) == pytest.approx(target, abs=1e-9)


def test_solve_permittivity_target_above_free_space_is_infeasible(link_config: LinkBudgetConfig):
    with pytest.raises(InfeasibleException):
        propagation.solve_permittivity(-10.0, link_config, 0.11, 1.1)


def test_solve_permittivity_requires_unreachable_loss(link_config: LinkBudgetConfig):
    """电导率太小时即使 ε′ᵣ=1 也达不到所需衰减"""
    with pytest.raises(InfeasibleException):
        propagation.solve_permittivity(-98.52, link_config, 0.001, 0.1)


def test_solve_permittivity_rejects_zero_sigma(link_config: LinkBudgetConfig):
    with pytest.raises(DomainException):
        propagation.solve_permittivity(-98.52, link_config, 0.0, 1.1)


# --- 材料数据库 ---
def test_material_database_concrete_entry():
    concrete = MaterialDAO().get("concrete")
    assert concrete.permittivity_real == pytest.approx(5.386)
    assert concrete.conductivity == pytest.approx(0.11)
    assert concrete.fitted is True
    assert concrete.within_quoted_range is True


def test_material_database_unknown_name():
    with pytest.raises(ConfigException):
        MaterialDAO().get("unobtainium")


def test_material_database_missing_file_falls_back(tmp_path):
    dao = MaterialDAO(tmp_path / "missing.txt")
    assert dao.get("brick").permittivity_real == pytest.approx(3.75)


def test_material_database_custom_file(tmp_path):
    path = tmp_path / "materials.txt"
    path.write_text("# 名称 ε σ\ndrywall 2.2 0.01\n\nfoam 1.1 0.0  # 泡沫\n", encoding="utf-8")
    names = [m.name for m in MaterialDAO(path).list_all()]
    assert names == ["drywall", "foam"]


def test_parse_material_line_rejects_garbage():
    assert parse_material_line("   # 注释") is None
    with pytest.raises(ValidationException):
        parse_material_line("concrete abc 0.1", 3)
    with pytest.raises(ValidationException):
        parse_material_line("concrete 5.0", 4)


def test_attenuation_report_absolute_permittivity(concrete: Material):
    report = propagation.attenuation_report(concrete, 1.1)
    assert report.permittivity_absolute_f_per_m == pytest.approx(5.386 * 8.8541878128e-12, rel=1e-6)
    assert report.attenuation_db == pytest.approx(propagation.material_attenuation(concrete, 1.1))
