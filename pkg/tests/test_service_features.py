"""
@FileName: test_service_features.py
@Docs: 测试特征提取与标准化
"""

import numpy as np
import pytest
from scipy import stats

from app.core.exceptions import DimensionMismatchException, EmptyDatasetException, TraceTooShortException
from app.schemas.csi import CsiTrace
from app.schemas.features import FEATURE_NAMES
from app.services import features


# --- 辅助函数 ---
def make_trace(samples: np.ndarray, sampling_rate: float = 20.0, activity: str = "walking") -> CsiTrace:
    return CsiTrace(
        trace_id=f"{activity}-0000",
        activity=activity,
        sampling_rate=sampling_rate,
        duration=samples.size / sampling_rate,
        samples=samples,
    )


def feature(vector, name: str) -> float:
    return float(vector.values[FEATURE_NAMES.index(name)])


# --- 单条特征 ---
def test_feature_order_and_count():
    vector = features.extract_features(make_trace(np.linspace(1.0, 2.0, 40)))
    assert vector.feature_names == FEATURE_NAMES
    assert vector.values.shape == (10,)


def test_constant_trace_features_are_zero():
    vector = features.extract_features(make_trace(np.full(100, 0.7)))
    assert feature(vector, "mean") == pytest.approx(0.7)
    assert feature(vector, "rms") == pytest.approx(0.7)
    flat = ("std", "range", "skewness", "kurtosis", "mad", "zero_crossings", "dominant_frequency", "spectral_entropy")
    for name in flat:
        assert feature(vector, name) == pytest.approx(0.0, abs=1e-12)
    assert np.all(np.isfinite(vector.values))


def test_sinusoid_dominant_frequency_and_crossings():
    t = np.arange(200) / 20.0
    vector = features.extract_features(make_trace(1.0 + 0.3 * np.sin(2 * np.pi * 2.0 * t + 0.3)))
    assert feature(vector, "dominant_frequency") == pytest.approx(2.0)
    assert feature(vector, "zero_crossings") in (39.0, 40.0)
    assert feature(vector, "mean") == pytest.approx(1.0, abs=1e-9)
    assert feature(vector, "range") == pytest.approx(0.6, abs=0.01)


def test_statistics_match_scipy():
    x = np.random.default_rng(0).gamma(2.0, 0.5, 160)
    vector = features.extract_features(make_trace(x))
    assert feature(vector, "skewness") == pytest.approx(stats.skew(x))
    assert feature(vector, "kurtosis") == pytest.approx(stats.kurtosis(x))
    assert feature(vector, "mad") == pytest.approx(np.median(np.abs(x - np.median(x))))
    assert feature(vector, "std") == pytest.approx(np.std(x))


@pytest.mark.parametrize("c", [1e-6, 0.37, 2.5, 1e4])
def test_scaling_trace_scales_amplitude_features_only(c):
    x = 1.0 + np.random.default_rng(7).normal(0.0, 0.2, 200)
    base = features.extract_features(make_trace(x))
    scaled = features.extract_features(make_trace(c * x))
    for name in ("mean", "std", "range", "rms", "mad"):
        assert feature(scaled, name) == pytest.approx(c * feature(base, name), rel=1e-9)
    for name in ("skewness", "kurtosis", "spectral_entropy"):
        assert feature(scaled, name) == pytest.approx(feature(base, name), rel=1e-9, abs=1e-9)
    assert feature(scaled, "zero_crossings") == feature(base, "zero_crossings")
    assert feature(scaled, "dominant_frequency") == feature(base, "dominant_frequency")


def test_tiny_amplitude_trace_is_not_treated_as_flat():
    t = np.arange(200) / 20.0
    x = 1e-12 * (1.0 + 0.3 * np.sin(2 * np.pi * 2.0 * t + 0.3))
    vector = features.extract_features(make_trace(x))
    assert feature(vector, "dominant_frequency") == pytest.approx(2.0)
    assert feature(vector, "zero_crossings") in (39.0, 40.0)


def test_tone_has_lower_spectral_entropy_than_noise():
    t = np.arange(256) / 20.0
    tone = features.extract_features(make_trace(1.0 + 0.5 * np.sin(2 * np.pi * 2.5 * t)))
    noise = features.extract_features(make_trace(1.0 + np.abs(np.random.default_rng(1).normal(0, 0.5, 256))))
    assert feature(tone, "spectral_entropy") < feature(noise, "spectral_entropy")


def test_short_trace_rejected():
    with pytest.raises(TraceTooShortException):
        features.extract_features(make_trace(np.ones(7)))


def test_feature_matrix_requires_traces():
    with pytest.raises(EmptyDatasetException):
        features.extract_feature_matrix([])


def test_feature_matrix_stacks_rows():
    traces = [make_trace(np.linspace(0, 1, 40), activity=a) for a in ("walking", "standing")]
    matrix, labels = features.extract_feature_matrix(traces)
    assert matrix.shape == (2, 10)
    assert labels == ["walking", "standing"]


# --- 标准化 ---
def test_standardize_training_columns():
    train = np.random.default_rng(3).normal(5.0, 2.0, (50, 4))
    z, scaler = features.standardize(train)
    assert z.mean(axis=0) == pytest.approx(np.zeros(4), abs=1e-12)
    assert z.std(axis=0) == pytest.approx(np.ones(4))
    assert scaler.transform(train.mean(axis=0)) == pytest.approx(np.zeros(4), abs=1e-12)


def test_zero_variance_dimension_passes_through():
    train = np.column_stack([np.arange(10.0), np.full(10, 3.0)])
    held_out = np.array([[4.5, 7.0]])
    z, scaler = features.standardize(train, held_out)
    assert scaler.center[1] == 0.0 and scaler.scale[1] == 1.0
    assert z[0, 1] == 7.0
    assert np.all(np.isfinite(z))


def test_standardize_dimension_mismatch():
    with pytest.raises(DimensionMismatchException):
        features.standardize(np.ones((5, 3)) * np.arange(5)[:, None], np.ones((2, 4)))


def test_standardize_empty_training_set():
    with pytest.raises(EmptyDatasetException):
        features.fit_scaler(np.empty((0, 3)))
