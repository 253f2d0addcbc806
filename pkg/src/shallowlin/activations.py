"""Neuron basis functions and their design matrices.

A neuron is ``phi_j(x) = sigma(w_j . x + b_j)`` with ``sigma`` either
``ReLU^k`` or ``tanh``. Design matrices have one row per evaluation point and
one column per neuron.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pointsets import HiddenParams
from .quadrature import as_box

__all__ = [
    "Activation",
    "NeuronSet",
    "relu_power",
    "tanh",
    "eval_values",
    "eval_gradients",
    "eval_laplacian",
    "eval_elliptic_op",
    "prune_neurons",
]

# rows per block when a design matrix is built in pieces
BLOCK_ROWS = 8192


@dataclass(frozen=True)
class Activation:
    """``kind`` is ``"relu"`` (with integer ``power >= 1``) or ``"tanh"``."""

    kind: str
    power: int = 1

    def __post_init__(self):
        if self.kind not in ("relu", "tanh"):
            raise ValueError(f"unknown activation kind {self.kind!r}")
        if self.kind == "relu" and (int(self.power) != self.power or self.power < 1):
            raise ValueError(f"ReLU power must be an integer >= 1, got {self.power}")

    def __str__(self):
        return "tanh" if self.kind == "tanh" else f"relu{self.power}"

    @classmethod
    def parse(cls, text: str) -> "Activation":
        """Accepts ``"tanh"``, ``"relu"``, ``"relu3"``, ``"relu^3"``."""
        t = text.strip().lower().replace("^", "")
        if t == "tanh":
            return cls("tanh")
        if t.startswith("relu"):
            return cls("relu", int(t[4:] or 1))
        raise ValueError(f"cannot parse activation {text!r}")

    def value(self, t):
        if self.kind == "tanh":
            return np.tanh(t)
        return _relu_pow(t, self.power)

    def first(self, t):
        if self.kind == "tanh":
            s = np.tanh(t)
            return 1.0 - s * s
        k = self.power
        if k == 1:
            return (t > 0.0).astype(np.float64)
        return k * _relu_pow(t, k - 1)

    def second(self, t):
        if self.kind == "tanh":
            s = np.tanh(t)
            return -2.0 * s * (1.0 - s * s)
        k = self.power
        if k == 1:
            return np.zeros_like(t)
        if k == 2:
            return 2.0 * (t > 0.0)
        return k * (k - 1) * _relu_pow(t, k - 2)


def _relu_pow(t, k):
    r = np.maximum(t, 0.0)
    out = r
    for _ in range(k - 1):
        out = out * r
    return out


def relu_power(k: int) -> Activation:
    return Activation("relu", k)


tanh = Activation("tanh")


@dataclass(frozen=True)
class NeuronSet:
    activation: Activation
    params: HiddenParams

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def d(self) -> int:
        return self.params.d

    def preactivation(self, points) -> np.ndarray:
        x = _check_points(points, self.d)
        return x @ self.params.weights.T + self.params.biases


def _check_points(points, d):
    x = np.asarray(points, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(-1, 1) if d == 1 else x.reshape(1, -1)
    if x.ndim != 2 or x.shape[1] != d:
        raise ValueError(f"points must have shape (m, {d}), got {np.shape(points)}")
    return x


def eval_values(neurons: NeuronSet, points) -> np.ndarray:
    """``(m, n)`` matrix of ``sigma(w_j . x_i + b_j)``."""
    return neurons.activation.value(neurons.preactivation(points))


def eval_gradients(neurons: NeuronSet, points) -> list[np.ndarray]:
    """One ``(m, n)`` matrix per axis: ``sigma'(t_ij) * w_{j,a}``."""
    ds = neurons.activation.first(neurons.preactivation(points))
    return [ds * neurons.params.weights[:, a] for a in range(neurons.d)]


def eval_laplacian(neurons: NeuronSet, points) -> np.ndarray:
    w2 = np.sum(neurons.params.weights**2, axis=1)
    return neurons.activation.second(neurons.preactivation(points)) * w2


def eval_elliptic_op(neurons: NeuronSet, points) -> np.ndarray:
    """Design matrix of ``-Laplace(phi_j) + phi_j`` at the points.

    ReLU^1 is rejected: its second derivative is a Dirac mass.
    """
    act = neurons.activation
    if act.kind == "relu" and act.power < 2:
        raise ValueError("the elliptic operator needs ReLU^k with k >= 2")
    t = neurons.preactivation(points)
    w2 = np.sum(neurons.params.weights**2, axis=1)
    return act.value(t) - act.second(t) * w2


def prune_neurons(neurons: NeuronSet, domain, policy: str = "inactive") -> NeuronSet:
    """Drop ReLU neurons that are degenerate on an axis-aligned box.

    ``policy``:

    - ``"none"``: keep everything.
    - ``"inactive"``: drop neurons that vanish identically on the box.
    - ``"kink"``: keep only neurons whose kink hyperplane cuts the open box;
      globally active neurons are polynomials there and quickly become
      linearly dependent.

    tanh neurons are never pruned.
    """
    if policy == "none" or neurons.activation.kind == "tanh":
        return neurons
    lo, hi = (np.asarray(v, dtype=np.float64) for v in zip(*as_box(domain)))
    center, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    w, b = neurons.params.weights, neurons.params.biases
    mid = b + w @ center
    spread = np.abs(w) @ half
    if policy == "inactive":
        keep = mid + spread > 0.0
    elif policy == "kink":
        keep = np.abs(mid) < spread
    else:
        raise ValueError(f"unknown pruning policy {policy!r}")
    return NeuronSet(neurons.activation, neurons.params.subset(keep))
