"""
@FileName: test_service_csi_synth.py
@Docs: 测试 CSI 序列合成与数据集读写
"""

import numpy as np
import pytest

from app.core.exceptions import ConfigException, DomainException, ValidationException
from app.dao import DatasetDAO
from app.schemas.base import Provenance
from app.schemas.csi import ACTIVITIES, ActivityModel, DatasetMetadata
from app.schemas.features import FEATURE_NAMES
from app.services import csi_synth
from app.services.features import extract_feature_matrix


# --- 辅助函数 ---
def model_for(activity: str) -> ActivityModel:
    return next(m for m in csi_synth.default_activity_models() if m.activity == activity)


@pytest.fixture
def with_ris_floor() -> float:
    return csi_synth.link_noise_floor(-87.08)


# --- 单条序列 ---
def test_default_models_cover_all_activities():
    assert tuple(m.activity for m in csi_synth.default_activity_models()) == ACTIVITIES


def test_trace_length_and_non_negative():
    trace = csi_synth.generate_trace(model_for("walking"), 10.0, 0.5, seed=3)
    assert trace.samples.size == 200
    assert np.all(trace.samples >= 0)


def test_trace_is_deterministic_per_seed():
    model = model_for("kicking")
    a = csi_synth.generate_trace(model, 10.0, 0.05, seed=42)
    b = csi_synth.generate_trace(model, 10.0, 0.05, seed=42)
    c = csi_synth.generate_trace(model, 10.0, 0.05, seed=43)
    assert np.array_equal(a.samples, b.samples)
    assert not np.array_equal(a.samples, c.samples)


def test_noiseless_periodic_trace_keeps_baseline_mean():
    trace = csi_synth.generate_trace(model_for("kicking"), 10.0, 0.0, seed=1)
    assert trace.samples.mean() == pytest.approx(1.0, abs=1e-9)


def test_transient_dip_and_rise_shapes():
    dip = csi_synth.generate_trace(model_for("sitting_down"), 10.0, 0.0, seed=5).samples
    rise = csi_synth.generate_trace(model_for("standing_up"), 10.0, 0.0, seed=5).samples
    assert dip.min() < 1.0 and dip.max() <= 1.0 + 1e-12
    assert rise.max() > 1.0 and rise.min() >= 1.0 - 1e-12
    assert dip[0] == pytest.approx(1.0) and rise[-1] == pytest.approx(1.0)


def test_noiseless_zero_depth_trace_is_constant_baseline():
    for kind in ("low_variance", "quasi_periodic", "transient_dip", "transient_rise"):
        model = ActivityModel(
            activity="standing", modulation_kind=kind, modulation_depth=0.0, modulation_rate=0.2, baseline_amplitude=0.8
        )
        samples = csi_synth.generate_trace(model, 10.0, 0.0, seed=17).samples
        assert np.all(samples == 0.8)


def test_walking_and_sitting_spectra(with_ris_floor):
    """步行主频在 1.5 Hz，坐下的能量集中在 0.5 Hz 以下"""
    freqs = np.fft.rfftfreq(200, d=1 / 20.0)
    for seed in range(5):
        walking = csi_synth.generate_trace(model_for("walking"), 10.0, with_ris_floor, seed=seed).samples
        spectrum = np.abs(np.fft.rfft(walking - walking.mean())) ** 2
        assert freqs[int(np.argmax(spectrum))] == pytest.approx(1.5, abs=0.1)

        sitting = csi_synth.generate_trace(model_for("sitting_down"), 10.0, with_ris_floor, seed=seed).samples
        spectrum = np.abs(np.fft.rfft(sitting - sitting.mean())) ** 2
        assert freqs[int(np.argmax(spectrum))] < 0.5
        assert spectrum[freqs < 0.5].sum() / spectrum.sum() > 0.6


def test_modulation_rate_must_stay_below_nyquist():
    model = ActivityModel(
        activity="walking", modulation_kind="quasi_periodic", modulation_depth=0.3, modulation_rate=10.0
    )
    with pytest.raises(ValidationException):
        csi_synth.generate_trace(model, 10.0, 0.1, seed=0, sampling_rate=20.0)


def test_negative_noise_floor_rejected():
    with pytest.raises(DomainException):
        csi_synth.generate_trace(model_for("standing"), 10.0, -0.1, seed=0)


# --- 链路噪声 ---
def test_noise_floor_from_link_budget():
    assert csi_synth.link_noise_floor(-113.1) == pytest.approx(1.0)
    ratio = csi_synth.link_noise_floor(-87.08) / csi_synth.link_noise_floor(-98.78)
    assert ratio == pytest.approx(10 ** (-11.7 / 20))
    assert csi_synth.link_noise_floor(-90.0, scale=2.0) == pytest.approx(2 * csi_synth.link_noise_floor(-90.0))


def test_higher_noise_widens_standing_trace():
    model = model_for("standing")
    quiet = csi_synth.generate_trace(model, 10.0, 0.01, seed=9).samples.std()
    loud = csi_synth.generate_trace(model, 10.0, 0.3, seed=9).samples.std()
    assert loud > quiet


def test_with_ris_floor_tightens_within_class_range(with_ris_floor):
    """同一种子下，有RIS噪声幅度时各类的幅度极差特征更集中"""
    models = csi_synth.default_activity_models()
    without_ris_floor = csi_synth.link_noise_floor(-98.78)
    spread = {}
    for name, floor in (("with", with_ris_floor), ("without", without_ris_floor)):
        traces = csi_synth.generate_dataset(models, 40, 10.0, floor, seed=2024)
        matrix, labels = extract_feature_matrix(traces)
        column = matrix[:, FEATURE_NAMES.index("range")]
        labels = np.asarray(labels)
        spread[name] = np.array([column[labels == a].var() for a in ACTIVITIES])
    assert np.all(spread["with"] < spread["without"])
    assert spread["with"].mean() < spread["without"].mean()


# --- 数据集 ---
def test_dataset_ids_and_order():
    traces = csi_synth.generate_dataset(csi_synth.default_activity_models(), 3, 10.0, 0.05, seed=2024)
    assert len(traces) == 18
    assert [t.trace_id for t in traces[:3]] == ["kicking-0000", "kicking-0001", "kicking-0002"]
    assert traces[-1].trace_id == "walking-0002"


def test_trace_seed_does_not_depend_on_count():
    models = csi_synth.default_activity_models()
    small = csi_synth.generate_dataset(models, 2, 10.0, 0.05, seed=7)
    large = csi_synth.generate_dataset(models, 4, 10.0, 0.05, seed=7)
    by_id = {t.trace_id: t for t in large}
    for trace in small:
        assert np.array_equal(trace.samples, by_id[trace.trace_id].samples)


def test_dataset_rejects_duplicate_activities():
    models = [model_for("walking"), model_for("walking")]
    with pytest.raises(ValidationException):
        csi_synth.generate_dataset(models, 2, 10.0, 0.05, seed=0)


def test_dataset_csv_preserves_samples_exactly(tmp_path):
    traces = csi_synth.generate_dataset(csi_synth.default_activity_models(), 2, 5.0, 0.05, seed=1)
    metadata = DatasetMetadata(
        sampling_rate_hz=20.0,
        duration_s=5.0,
        per_activity_count=2,
        seed=1,
        noise_floor=0.05,
        noise_mode="fixed",
        activity_models=csi_synth.default_activity_models(),
        trace_count=len(traces),
    )
    dao = DatasetDAO(tmp_path)
    path = dao.save("dataset.csv", traces, metadata, Provenance(config_hash="test", command="synth"))
    assert path.read_text(encoding="utf-8").startswith("# provenance ")
    loaded, loaded_meta = dao.load("dataset.csv")
    assert loaded_meta.trace_count == 12
    assert [t.trace_id for t in loaded] == [t.trace_id for t in traces]
    for original, restored in zip(traces, loaded, strict=True):
        assert np.array_equal(original.samples, restored.samples)


def test_dataset_load_missing_file(tmp_path):
    with pytest.raises(ConfigException):
        DatasetDAO(tmp_path).load("missing.csv")
