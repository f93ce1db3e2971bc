import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from astskin.calib import ModelSpec, predict, train_model
from astskin.calib.gp import GaussianProcess
from astskin.calib.kernels import KERNELS, kernel_matrix
from astskin.errors import DatasetError, ShapeError

from oracles import gp_mean, two_point_exponential

RAW = dict(standardize=False)


def raw_spec(kind, ell=1.0, sf2=1.0, sn2=0.0):
    return ModelSpec(kind, {"length_scale": ell, "signal_variance": sf2, "noise_variance": sn2}, **RAW)


class TestTwoPointCase:

    def test_closed_form_value(self):
        assert two_point_exponential() == pytest.approx(0.4434, abs=1e-4)

    def test_gp_matches_closed_form(self):
        gp = GaussianProcess("gp-exponential", 1.0, 1.0, 0.0).fit([[0.0], [1.0]], [0.0, 1.0])
        assert gp.predict([[0.5]])[0] == pytest.approx(two_point_exponential(), rel=1e-12)

    def test_train_model_path(self):
        m = train_model(([[0.0], [1.0]], [0.0, 1.0]), raw_spec("gp-exponential"))
        assert predict(m, [0.5]) == pytest.approx(two_point_exponential(), rel=1e-12)


class TestOracleAgreement:

    @pytest.mark.parametrize("kind", KERNELS)
    def test_random_small_datasets(self, kind):
        rng = np.random.default_rng(123)
        for _ in range(50):
            n, d = rng.integers(1, 6), rng.integers(1, 4)
            X = rng.normal(size=(n, d))
            y = rng.normal(size=n)
            Xs = rng.normal(size=(4, d))
            ell, sf2, sn2 = rng.uniform(0.3, 3), rng.uniform(0.5, 2), rng.uniform(1e-3, 0.1)
            gp = GaussianProcess(kind, ell, sf2, sn2).fit(X, y)
            expected = gp_mean(kind, X, y, Xs, ell, sf2, sn2)
            np.testing.assert_allclose(gp.predict(Xs), expected, rtol=1e-9, atol=1e-12)


class TestInterpolation:

    def test_single_point(self):
        m = train_model(([[0.3, 0.7]], [5.0]), raw_spec("gp-exponential"))
        assert predict(m, [0.3, 0.7]) == pytest.approx(5.0)

    @pytest.mark.parametrize("kind", KERNELS)
    def test_noiseless_reproduces_labels(self, kind):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(12, 3))
        y = rng.uniform(0, 10, 12)
        m = train_model((X, y), ModelSpec(kind, {"length_scale": 1.0, "signal_variance": 1.0,
                                                 "noise_variance": 0.0}))
        np.testing.assert_allclose(m.predict(X), y, atol=1e-6)

    def test_far_away_reverts_to_label_mean(self):
        X = np.array([[0.0], [1.0], [2.0]])
        y = np.array([1.0, 4.0, 7.0])
        m = train_model((X, y), ModelSpec("gp-exponential", {"length_scale": 1.0, "signal_variance": 1.0,
                                                             "noise_variance": 1e-3}))
        assert predict(m, [1e4]) == pytest.approx(4.0, abs=1e-9)

    def test_prediction_clamped(self):
        m = train_model(([[0.0], [1.0]], [0.0, 0.0]), raw_spec("gp-exponential"))
        m.state["alpha"] = np.array([-1.0, -1.0])
        m._build()
        assert predict(m, [0.5]) == 0.0


class TestKernels:

    @pytest.mark.parametrize("kind", KERNELS)
    def test_symmetric_positive_definite(self, kind):
        X = np.random.default_rng(9).normal(size=(40, 4))
        K = kernel_matrix(kind, X, length_scale=1.3, signal_variance=2.0)
        assert np.max(np.abs(K - K.T)) <= 1e-12
        assert np.linalg.eigvalsh(K + 1e-10 * np.eye(40)).min() > 0

    @pytest.mark.parametrize("kind", KERNELS)
    def test_value_at_zero_is_signal_variance(self, kind):
        assert kernel_matrix(kind, [[1.0, 2.0]], length_scale=0.7, signal_variance=3.0)[0, 0] == pytest.approx(3.0)

    def test_duplicate_points_need_jitter(self):
        X = np.zeros((3, 2))
        gp = GaussianProcess("gp-exponential", 1.0, 1.0, 0.0).fit(X, [1.0, 1.0, 1.0])
        assert np.isfinite(gp.predict(X)).all()


class TestErrors:

    def test_empty(self):
        with pytest.raises(DatasetError):
            train_model((np.zeros((0, 2)), np.zeros(0)), raw_spec("gp-exponential"))

    def test_dimension_mismatch(self):
        m = train_model(([[0.0, 1.0]], [1.0]), raw_spec("gp-exponential"))
        with pytest.raises(ShapeError):
            predict(m, [0.0, 1.0, 2.0])

    def test_bad_hyperparameters(self):
        with pytest.raises(ValueError):
            ModelSpec("gp-exponential", {"length_scale": -1.0})


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 100.0), st.floats(-50.0, 50.0))
def test_affine_feature_rescaling_invariance(scale, shift):
    rng = np.random.default_rng(0)
    X = rng.uniform(0, 2000, size=(30, 4))
    y = rng.uniform(0, 10, 30)
    Xs = rng.uniform(0, 2000, size=(5, 4))
    spec = ModelSpec("gp-exponential", {"length_scale": 2.0, "signal_variance": 4.0, "noise_variance": 0.01})
    a = train_model((X, y), spec).predict(Xs)
    b = train_model((scale * X + shift, y), spec).predict(scale * Xs + shift)
    np.testing.assert_allclose(b, a, rtol=1e-9, atol=1e-9)
