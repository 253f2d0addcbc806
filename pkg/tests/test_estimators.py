import numpy as np
import pytest
from sklearn.base import clone
from sklearn.linear_model import Ridge
from sklearn.pipeline import make_pipeline

from shallowlin import (
    EllipticCollocationSolver,
    GalerkinEllipticSolver,
    LinearizedNetworkRegressor,
    NeuronFeatures,
)
from shallowlin.targets import ProdSinHalfPi, SumSinM

X = np.linspace(-1, 1, 400)[:, None]
Y = np.sin(np.pi * X[:, 0] / 2)


def test_params_and_clone():
    est = LinearizedNetworkRegressor(n_neurons=32, scheme="circle", rcond=1e-12)
    assert est.get_params()["n_neurons"] == 32
    c = clone(est).set_params(n_neurons=16)
    assert c.n_neurons == 16 and est.n_neurons == 32


def test_regressor_fits_smooth_target():
    est = LinearizedNetworkRegressor(n_neurons=64, scheme="circle").fit(X, Y)
    assert est.score(X, Y) > 1 - 1e-8
    assert est.coef_.shape == (64,)


def test_normal_solver_agrees_when_well_conditioned():
    kw = dict(activation="tanh", scheme="random_box", n_neurons=5, scheme_params={"R": 2.0}, random_state=1)
    a = LinearizedNetworkRegressor(solver="lstsq", **kw).fit(X, Y).predict(X)
    b = LinearizedNetworkRegressor(solver="normal", **kw).fit(X, Y).predict(X)
    np.testing.assert_allclose(a, b, rtol=1e-7, atol=1e-9)


def test_sample_weight_and_validation():
    w = np.ones(len(X))
    a = LinearizedNetworkRegressor(n_neurons=16, scheme="circle").fit(X, Y, sample_weight=w).predict(X)
    b = LinearizedNetworkRegressor(n_neurons=16, scheme="circle").fit(X, Y).predict(X)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-14)
    with pytest.raises(ValueError):
        LinearizedNetworkRegressor(solver="qr").fit(X, Y)
    with pytest.raises(ValueError):
        LinearizedNetworkRegressor().fit(X, Y[:-1])


def test_feature_pipeline():
    pipe = make_pipeline(NeuronFeatures(activation="tanh", scheme="sphere_scheme", n_neurons=32,
                                        scheme_params={"r": 4.0}), Ridge(alpha=1e-10))
    pipe.fit(X, Y)
    assert pipe.score(X, Y) > 1 - 1e-8
    assert pipe[0].transform(X).shape == (400, 32)


def test_predict_needs_fit():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        LinearizedNetworkRegressor().predict(X)


def test_collocation_solver():
    u = SumSinM((1, 2, 4), 1)
    xs = np.linspace(-1, 1, 200)[:, None]
    est = EllipticCollocationSolver(n_neurons=64, scheme_params={"r": 4.0})
    est.fit(xs[1:-1], u.elliptic_rhs, xs[[0, -1]], u.value)
    assert np.abs(est.predict(xs) - u.value(xs)).max() < 1e-5


def test_galerkin_solver():
    u = ProdSinHalfPi(1)
    est = GalerkinEllipticSolver(scheme="circle", n_neurons=64, cells=256, order=3).fit(u.elliptic_rhs)
    xs = np.linspace(-1, 1, 101)[:, None]
    assert np.abs(est.predict(xs) - u.value(xs)).max() < 1e-4
