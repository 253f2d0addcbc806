"""Error norms of a fitted network against an exact solution."""

from __future__ import annotations

import numpy as np

from ..activations import BLOCK_ROWS, NeuronSet
from ..quadrature import QuadratureRule

__all__ = ["l2_error", "h1_error", "errors"]


def errors(target, neurons: NeuronSet, coeffs, rule: QuadratureRule, h1: bool = True):
    """``(||u - u_n||_L2, |u - u_n|_H1)`` by quadrature; one pass over the rule."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    act, W = neurons.activation, neurons.params.weights
    e2 = g2 = 0.0
    for start in range(0, rule.size, BLOCK_ROWS):
        pts = rule.points[start:start + BLOCK_ROWS]
        w = rule.weights[start:start + BLOCK_ROWS]
        t = neurons.preactivation(pts)
        r = act.value(t) @ coeffs - target.value(pts)
        e2 += float(w @ (r * r))
        if h1:
            gr = (act.first(t) * coeffs) @ W - target.gradient(pts)
            g2 += float(w @ np.sum(gr * gr, axis=1))
    return float(np.sqrt(e2)), (float(np.sqrt(g2)) if h1 else float("nan"))


def l2_error(target, neurons, coeffs, rule) -> float:
    return errors(target, neurons, coeffs, rule, h1=False)[0]


def h1_error(target, neurons, coeffs, rule) -> float:
    """H1 seminorm of the error, i.e. the L2 norm of its gradient."""
    return errors(target, neurons, coeffs, rule)[1]
