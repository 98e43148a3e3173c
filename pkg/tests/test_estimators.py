import numpy as np
import pytest
from numpy.testing import assert_allclose
from sklearn.base import clone
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from qjacobi.estimators import QJacobiFeatures
from qjacobi.exceptions import DomainError

from conftest import REF_BIG, REF_LITTLE, mp_big, mp_little, mp_poch


def test_get_params_and_clone():
    est = QJacobiFeatures(family="big", degree=3, normalize=True)
    params = est.get_params()
    assert params["family"] == "big" and params["degree"] == 3
    twin = clone(est)
    assert twin.get_params() == params
    assert not hasattr(twin, "params_")


def test_transform_matches_oracle():
    q, a, b = REF_LITTLE
    X = np.array([[0.5, -0.5], [0.125, 2.0]])
    out = QJacobiFeatures(degree=4, q=q, a=a, b=b).fit_transform(X)
    assert out.shape == (2, 10)
    for i in range(2):
        for j in range(2):
            for n in range(5):
                assert out[i, 5 * j + n] == pytest.approx(float(mp_little(n, X[i, j], q, a, b)), rel=1e-12, abs=1e-14)


def test_big_transform_matches_oracle():
    q, a, b, c = REF_BIG
    xs = np.array([[a * q], [c * q ** 2], [-0.7]])
    out = QJacobiFeatures(family="big", degree=3, q=q, a=a, b=b, c=c).fit_transform(xs)
    expected = [[float(mp_big(n, x, q, a, b, c)) for n in range(4)] for x in xs[:, 0]]
    assert_allclose(out, expected, rtol=1e-11, atol=1e-14)


def test_normalized_features_are_orthonormal():
    q, a, b = REF_LITTLE
    T = 120
    x = q ** np.arange(T)
    w = np.array([float(mp_poch(b * q, q, k) / mp_poch(q, q, k)) * (a * q) ** k for k in range(T)])
    F = QJacobiFeatures(degree=6, q=q, a=a, b=b, normalize=True).fit_transform(x[:, None])
    assert_allclose(F.T @ (w[:, None] * F), np.eye(7), atol=1e-12)


def test_feature_names():
    est = QJacobiFeatures(degree=2).fit(np.zeros((3, 2)))
    assert list(est.get_feature_names_out()) == ["x0_p0", "x0_p1", "x0_p2", "x1_p0", "x1_p1", "x1_p2"]
    assert list(est.get_feature_names_out(["t"] * 2))[:2] == ["t_p0", "t_p1"]


def test_pipeline_roundtrip():
    X = np.linspace(0.1, 0.9, 12).reshape(6, 2)
    pipe = make_pipeline(QJacobiFeatures(degree=3), StandardScaler())
    assert pipe.fit_transform(X).shape == (6, 8)


@pytest.mark.parametrize("kwargs", [{"family": "jacobi"}, {"degree": -1}, {"degree": 1.5},
                                    {"family": "big", "c": 0.3}])
def test_bad_parameters(kwargs):
    with pytest.raises(DomainError):
        QJacobiFeatures(**kwargs).fit(np.ones((2, 1)))


def test_width_mismatch_and_unfitted():
    est = QJacobiFeatures()
    with pytest.raises(Exception):
        est.transform(np.ones((2, 1)))
    est.fit(np.ones((2, 2)))
    with pytest.raises(ValueError):
        est.transform(np.ones((2, 3)))
