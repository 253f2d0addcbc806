"""scikit-learn style wrappers around the linearized network solvers.

Hidden parameters are drawn in ``fit`` from the configured scheme; only the
output coefficients are learned.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_points, check_targets, check_weights, function_values
from .activations import Activation, NeuronSet, eval_elliptic_op, eval_values, prune_neurons
from .assembly import energy_matrix, load_vector
from .linalg import solve_spd, svd_lstsq
from .pointsets import RngSpec, generate
from .quadrature import piecewise_tensor_rule

__all__ = [
    "NeuronFeatures",
    "LinearizedNetworkRegressor",
    "EllipticCollocationSolver",
    "GalerkinEllipticSolver",
]


class _NeuronMixin:
    def _make_neurons(self, d, domain=None):
        params = generate(self.scheme, int(self.n_neurons), d, RngSpec(int(self.random_state)).generator(),
                          **(self.scheme_params or {}))
        neurons = NeuronSet(Activation.parse(self.activation), params)
        if self.prune != "none":
            neurons = prune_neurons(neurons, domain, self.prune)
        return neurons


class NeuronFeatures(_NeuronMixin, TransformerMixin, BaseEstimator):
    """Map inputs to the values of ``n_neurons`` fixed neurons.

    Parameters
    ----------
    activation : str
        ``"relu2"``, ``"tanh"``, ...
    scheme : str
        Point-set scheme for the hidden parameters, see
        :func:`shallowlin.pointsets.generate`.
    n_neurons : int
    scheme_params : dict, optional
        Extra scheme arguments such as ``{"r": 8.0}``.
    random_state : int
        Seed for randomized schemes.
    prune : {"none", "inactive", "kink"}
        Pruning of degenerate ReLU neurons on the bounding box of the
        training inputs.
    """

    def __init__(self, activation="relu2", scheme="quasi_uniform", n_neurons=64,
                 scheme_params=None, random_state=0, prune="none"):
        self.activation = activation
        self.scheme = scheme
        self.n_neurons = n_neurons
        self.scheme_params = scheme_params
        self.random_state = random_state
        self.prune = prune

    def fit(self, X, y=None):
        X = check_points(X)
        box = list(zip(X.min(axis=0), X.max(axis=0)))
        self.neurons_ = self._make_neurons(X.shape[1], box)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "neurons_")
        return eval_values(self.neurons_, check_points(X, self.n_features_in_))


class LinearizedNetworkRegressor(_NeuronMixin, RegressorMixin, BaseEstimator):
    """Least-squares fit of the output layer of a fixed shallow network.

    ``solver="lstsq"`` solves the row-weighted system by SVD; ``"normal"``
    forms and solves ``Phi^T W Phi a = Phi^T W y``, which squares the
    condition number.
    """

    def __init__(self, activation="relu2", scheme="quasi_uniform", n_neurons=64,
                 scheme_params=None, random_state=0, prune="none", solver="lstsq", rcond=None):
        self.activation = activation
        self.scheme = scheme
        self.n_neurons = n_neurons
        self.scheme_params = scheme_params
        self.random_state = random_state
        self.prune = prune
        self.solver = solver
        self.rcond = rcond

    def fit(self, X, y, sample_weight=None):
        X = check_points(X)
        y = check_targets(y, X.shape[0])
        w = check_weights(sample_weight, X.shape[0])
        if self.solver not in ("lstsq", "normal"):
            raise ValueError(f"solver must be 'lstsq' or 'normal', got {self.solver!r}")
        box = list(zip(X.min(axis=0), X.max(axis=0)))
        self.neurons_ = self._make_neurons(X.shape[1], box)
        sw = np.sqrt(w)
        A = eval_values(self.neurons_, X) * sw[:, None]
        if self.solver == "lstsq":
            rep = svd_lstsq(A, sw * y, self.rcond)
        else:
            G = A.T @ A
            rep = solve_spd(0.5 * (G + G.T), A.T @ (sw * y))
        self.coef_ = rep.coefficients
        self.solve_report_ = rep
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        return eval_values(self.neurons_, check_points(X, self.n_features_in_)) @ self.coef_


class EllipticCollocationSolver(_NeuronMixin, BaseEstimator):
    """Collocation solve of ``-Laplace(u) + u = f`` with optional Dirichlet rows."""

    def __init__(self, activation="tanh", scheme="sphere_scheme", n_neurons=128, scheme_params=None,
                 random_state=0, prune="none", rcond=None, penalty_interior=1.0, penalty_boundary=1.0):
        self.activation = activation
        self.scheme = scheme
        self.n_neurons = n_neurons
        self.scheme_params = scheme_params
        self.random_state = random_state
        self.prune = prune
        self.rcond = rcond
        self.penalty_interior = penalty_interior
        self.penalty_boundary = penalty_boundary

    def fit(self, X_interior, f, X_boundary=None, g=None):
        """``f`` and ``g`` are callables or arrays of values at the points."""
        Xi = check_points(X_interior, name="X_interior")
        d = Xi.shape[1]
        stacked = Xi if X_boundary is None else np.vstack([Xi, check_points(X_boundary, d, "X_boundary")])
        box = list(zip(stacked.min(axis=0), stacked.max(axis=0)))
        self.neurons_ = self._make_neurons(d, box)
        si = np.sqrt(float(self.penalty_interior))
        rows = [si * eval_elliptic_op(self.neurons_, Xi)]
        rhs = [si * function_values(f, Xi, "f")]
        if X_boundary is not None:
            if g is None:
                raise ValueError("boundary points need Dirichlet data g")
            Xb = check_points(X_boundary, d, "X_boundary")
            sb = np.sqrt(float(self.penalty_boundary))
            rows.append(sb * eval_values(self.neurons_, Xb))
            rhs.append(sb * function_values(g, Xb, "g"))
        rep = svd_lstsq(np.vstack(rows), np.concatenate(rhs), self.rcond)
        self.coef_ = rep.coefficients
        self.solve_report_ = rep
        self.n_features_in_ = d
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        return eval_values(self.neurons_, check_points(X, self.n_features_in_)) @ self.coef_


class GalerkinEllipticSolver(_NeuronMixin, BaseEstimator):
    """Energy-matrix solve of the zero-Neumann problem on ``(-1, 1)^d``.

    The load vector is integrated with a piecewise Gauss rule of
    ``cells`` cells per axis and ``order`` points per cell.
    """

    def __init__(self, activation="relu3", scheme="quasi_uniform", n_neurons=64, scheme_params=None,
                 random_state=0, prune="inactive", dim=1, cells=100, order=3):
        self.activation = activation
        self.scheme = scheme
        self.n_neurons = n_neurons
        self.scheme_params = scheme_params
        self.random_state = random_state
        self.prune = prune
        self.dim = dim
        self.cells = cells
        self.order = order

    def fit(self, f):
        domain = [(-1.0, 1.0)] * int(self.dim)
        self.neurons_ = self._make_neurons(int(self.dim), domain)
        rule = piecewise_tensor_rule(domain, int(self.cells), int(self.order))
        rep = solve_spd(energy_matrix(self.neurons_, rule), load_vector(self.neurons_, rule, f, "EnergyH1"))
        self.coef_ = rep.coefficients
        self.solve_report_ = rep
        self.n_features_in_ = int(self.dim)
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        return eval_values(self.neurons_, check_points(X, self.n_features_in_)) @ self.coef_
