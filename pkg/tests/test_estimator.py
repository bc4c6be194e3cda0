import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from cpa_lyap import CPALyapunovEstimator
from cpa_lyap.expr import SystemModel

LINEAR = {"dynamics": ["-x1", "-x2"], "domain": [[-1, 1], [-1, 1]], "name": "linear"}


def fitted(**params):
    return CPALyapunovEstimator(method="grid", grid_spacing=0.5, **params).fit(LINEAR)


def test_params_round_trip():
    est = CPALyapunovEstimator(method="method2", points_per_segment=4)
    params = est.get_params()
    assert params["points_per_segment"] == 4 and params["alpha"] == 1.0
    assert clone(est).get_params() == params


def test_fit_sets_attributes():
    est = fitted()
    assert est.viable_ and est.n_features_in_ == 2
    assert est.triangulation_.n_simplices == 32


def test_predict_matches_vertex_values():
    est = fitted()
    t = est.triangulation_
    assert np.allclose(est.predict(t.vertices), est.candidate_.values)
    assert est.predict([[0.0, 0.0]])[0] == pytest.approx(0.0, abs=1e-12)


def test_predict_dominates_norm():
    est = fitted()
    X = np.random.default_rng(0).uniform(-1, 1, size=(500, 2))
    assert np.all(est.predict(X) >= np.linalg.norm(X, axis=1) - 1e-7)
    assert est.score(X) >= -1e-7


def test_gradient_matches_finite_differences():
    est = fitted()
    X = np.random.default_rng(1).uniform(-0.9, 0.9, size=(50, 2))
    g = est.predict_gradient(X)
    h = 1e-7
    for k in range(2):
        e = np.zeros(2)
        e[k] = h
        fd = (est.predict(X + e) - est.predict(X - e)) / (2 * h)
        # points near a face can straddle two simplices; compare where both sides agree
        same = est.triangulation_.locate_many(X + e)[0] == est.triangulation_.locate_many(X - e)[0]
        assert np.allclose(g[same, k], fd[same], rtol=1e-5, atol=1e-6)


def test_accepts_model_instance():
    model = SystemModel.from_strings(["-x1"], [(-1, 1)])
    est = CPALyapunovEstimator(method="grid", grid_spacing=0.5).fit(model)
    assert est.viable_


def test_not_fitted():
    with pytest.raises(NotFittedError):
        CPALyapunovEstimator().predict([[0.0, 0.0]])


@pytest.mark.parametrize("X", [[[0.0]], [[2.0, 0.0]], [[np.nan, 0.0]]])
def test_bad_points(X):
    with pytest.raises(ValueError):
        fitted().predict(X)


def test_bad_system():
    with pytest.raises(ValueError):
        CPALyapunovEstimator(method="grid", grid_spacing=0.5).fit({"dynamics": ["-x1"]})
    with pytest.raises(TypeError):
        CPALyapunovEstimator(method="grid", grid_spacing=0.5).fit(["-x1"])
