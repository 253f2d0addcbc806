"""Galerkin mass/energy systems and the weighted least-squares variant.

All Gram matrices are accumulated over fixed-size blocks of quadrature
points, summed in block order, so results do not depend on threading.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .activations import BLOCK_ROWS, NeuronSet, eval_values
from .quadrature import QuadratureRule

__all__ = [
    "GalerkinSystem",
    "DesignSystem",
    "mass_matrix",
    "energy_matrix",
    "load_vector",
    "galerkin_system",
    "variational_lstsq_system",
    "normal_equations",
]


@dataclass(frozen=True)
class GalerkinSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    flavor: str  # "Mass" or "EnergyH1"


@dataclass(frozen=True)
class DesignSystem:
    """Row-scaled least-squares problem ``min ||matrix @ a - rhs||``.

    ``matrix`` and ``rhs`` already carry the ``sqrt(row_weights)`` scaling.
    """

    matrix: np.ndarray
    rhs: np.ndarray
    row_weights: np.ndarray

    def __post_init__(self):
        if not self.matrix.shape[0] == self.rhs.shape[0] == self.row_weights.shape[0]:
            raise ValueError("matrix, rhs and row_weights disagree in row count")
        if np.any(self.row_weights < 0):
            raise ValueError("row weights must be nonnegative")


def _check(neurons, rule):
    if rule.dim != neurons.d:
        raise ValueError(f"rule dimension {rule.dim} does not match neuron dimension {neurons.d}")


def _blocks(rule):
    for start in range(0, rule.size, BLOCK_ROWS):
        stop = min(start + BLOCK_ROWS, rule.size)
        yield start, stop, rule.points[start:stop], rule.weights[start:stop]


def _mirror_upper(G):
    upper = np.triu(G)
    return upper + np.triu(upper, 1).T


def _sample(f, pts, start, stop):
    vals = f[start:stop] if isinstance(f, np.ndarray) else np.asarray(f(pts), dtype=np.float64)
    vals = vals.reshape(-1)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("function returned non-finite values at quadrature points")
    return vals


def mass_matrix(neurons: NeuronSet, rule: QuadratureRule) -> np.ndarray:
    """``M_ij = sum_k w_k phi_i(x_k) phi_j(x_k)``."""
    _check(neurons, rule)
    G = np.zeros((neurons.n, neurons.n))
    for _, _, pts, w in _blocks(rule):
        B = eval_values(neurons, pts) * np.sqrt(w)[:, None]
        G += B.T @ B
    return _mirror_upper(G)


def energy_matrix(neurons: NeuronSet, rule: QuadratureRule) -> np.ndarray:
    """``A_ij = sum_k w_k (grad phi_i . grad phi_j + phi_i phi_j)(x_k)``.

    Uses ``grad phi_i . grad phi_j = sigma'_i sigma'_j (w_i . w_j)``, so the
    gradient part costs one Gram product regardless of dimension.
    """
    _check(neurons, rule)
    act = neurons.activation
    G0 = np.zeros((neurons.n, neurons.n))
    G1 = np.zeros_like(G0)
    for _, _, pts, w in _blocks(rule):
        t = neurons.preactivation(pts)
        sw = np.sqrt(w)[:, None]
        B = act.value(t) * sw
        G0 += B.T @ B
        B = act.first(t) * sw
        G1 += B.T @ B
    W = neurons.params.weights
    return _mirror_upper(G0 + G1 * (W @ W.T))


def load_vector(neurons: NeuronSet, rule: QuadratureRule, f, flavor: str = "Mass") -> np.ndarray:
    """``b_i = sum_k w_k f(x_k) phi_i(x_k)``.

    ``f`` is a callable on ``(m, d)`` arrays or an array of values at the
    rule's points. For ``flavor="Mass"`` pass the target ``u``; for
    ``"EnergyH1"`` pass the right-hand side of the PDE.
    """
    if flavor not in ("Mass", "EnergyH1"):
        raise ValueError(f"unknown flavor {flavor!r}")
    _check(neurons, rule)
    b = np.zeros(neurons.n)
    for start, stop, pts, w in _blocks(rule):
        vals = _sample(f, pts, start, stop)
        b += eval_values(neurons, pts).T @ (w * vals)
    return b


def galerkin_system(neurons, rule, f, flavor="Mass") -> GalerkinSystem:
    mat = mass_matrix(neurons, rule) if flavor == "Mass" else energy_matrix(neurons, rule)
    return GalerkinSystem(mat, load_vector(neurons, rule, f, flavor), flavor)


def variational_lstsq_system(neurons: NeuronSet, rule: QuadratureRule, u) -> DesignSystem:
    """Rows ``sqrt(w_k) phi_j(x_k)``, rhs ``sqrt(w_k) u(x_k)``.

    Its least-squares minimizer solves the normal equations
    ``Phi^T W Phi a = Phi^T W u``, i.e. the mass-matrix system, without
    squaring the condition number.
    """
    _check(neurons, rule)
    sw = np.sqrt(rule.weights)
    vals = _sample(u, rule.points, 0, rule.size)
    return DesignSystem(eval_values(neurons, rule.points) * sw[:, None], sw * vals, rule.weights.copy())


def normal_equations(system: DesignSystem) -> tuple[np.ndarray, np.ndarray]:
    """``(A^T A, A^T y)`` for a row-scaled design system."""
    A, y = system.matrix, system.rhs
    return _mirror_upper(A.T @ A), A.T @ y
