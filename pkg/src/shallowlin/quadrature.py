"""Gauss-Legendre and quasi-Monte Carlo rules on axis-aligned boxes."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .pointsets import sobol_points

__all__ = [
    "QuadratureRule",
    "as_box",
    "box_volume",
    "gauss_legendre",
    "piecewise_tensor_rule",
    "qmc_rule",
    "integrate",
    "MAX_RULE_POINTS",
]

MAX_RULE_POINTS = 200_000_000
_CHUNK = 65536


def as_box(domain) -> tuple[tuple[float, float], ...]:
    """Normalize ``(a, b)`` or ``[(a1, b1), ...]`` to a tuple of float pairs."""
    arr = np.asarray(domain, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"domain must be a sequence of (lo, hi) pairs, got {domain!r}")
    if np.any(arr[:, 1] <= arr[:, 0]):
        raise ValueError(f"empty box {domain!r}")
    return tuple((float(a), float(b)) for a, b in arr)


def box_volume(domain) -> float:
    return float(np.prod([b - a for a, b in as_box(domain)]))


@dataclass(frozen=True)
class QuadratureRule:
    points: np.ndarray
    weights: np.ndarray
    domain: tuple

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        w = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if pts.shape[0] != w.shape[0]:
            raise ValueError("points and weights disagree in length")
        box = as_box(self.domain)
        if len(box) != pts.shape[1]:
            raise ValueError("domain dimension does not match the points")
        if not np.all(w > 0):
            raise ValueError("quadrature weights must be positive")
        lo, hi = (np.array(v) for v in zip(*box))
        if np.any(pts < lo) or np.any(pts > hi):
            raise ValueError("quadrature points must lie in the closed domain")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "domain", as_box(self.domain))

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@lru_cache(maxsize=None)
def _gauss_legendre_cached(p):
    if p == 1:
        return np.zeros(1), np.full(1, 2.0)
    k = np.arange(1, p)
    off = k / np.sqrt(4.0 * k * k - 1.0)
    x, vecs = eigh_tridiagonal(np.zeros(p), off)
    # Newton polish on P_p brings the nodes to full double precision
    for _ in range(3):
        pn, dpn = _legendre_and_derivative(p, x)
        x = x - pn / dpn
    _, dpn = _legendre_and_derivative(p, x)
    w = 2.0 / ((1.0 - x * x) * dpn * dpn)
    # enforce exact symmetry of the rule
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _legendre_and_derivative(p, x):
    p0, p1 = np.ones_like(x), x.copy()
    for j in range(2, p + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    dp = p * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


def gauss_legendre(p: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the ``p``-point Gauss-Legendre rule on [-1, 1].

    Nodes come from the Golub-Welsch eigenproblem of the Jacobi matrix.
    """
    if int(p) != p or not 1 <= p <= 20:
        raise ValueError(f"Gauss-Legendre order must be in 1..20, got {p}")
    return _gauss_legendre_cached(int(p))


def piecewise_tensor_rule(domain, cells_per_axis: int, p: int) -> QuadratureRule:
    """``p``-point Gauss rule in each of ``cells_per_axis**d`` uniform cells."""
    box = as_box(domain)
    if int(cells_per_axis) != cells_per_axis or cells_per_axis < 1:
        raise ValueError(f"cells_per_axis must be a positive integer, got {cells_per_axis}")
    d = len(box)
    total = (cells_per_axis * p) ** d
    if total > MAX_RULE_POINTS:
        raise MemoryError(
            f"rule would have {total} points, above the {MAX_RULE_POINTS} point budget"
        )
    x, w = gauss_legendre(p)
    axes_pts, axes_w = [], []
    for a, b in box:
        h = (b - a) / cells_per_axis
        left = a + h * np.arange(cells_per_axis)
        axes_pts.append((left[:, None] + 0.5 * h * (x + 1.0)).reshape(-1))
        axes_w.append(np.tile(0.5 * h * w, cells_per_axis))
    grids = np.meshgrid(*axes_pts, indexing="ij")
    pts = np.stack([g.reshape(-1) for g in grids], axis=1)
    wts = axes_w[0]
    for extra in axes_w[1:]:
        wts = np.multiply.outer(wts, extra).reshape(-1)
    return QuadratureRule(pts, wts, box)


def qmc_rule(n: int, domain, skip: int = 1) -> QuadratureRule:
    """Equal-weight rule on ``n`` Sobol points mapped into the box."""
    box = as_box(domain)
    if n > MAX_RULE_POINTS:
        raise MemoryError(f"{n} points exceed the {MAX_RULE_POINTS} point budget")
    u = sobol_points(n, len(box), skip)
    lo = np.array([a for a, _ in box])
    hi = np.array([b for _, b in box])
    pts = lo + u * (hi - lo)
    return QuadratureRule(pts, np.full(n, box_volume(box) / n), box)


def integrate(f, rule: QuadratureRule) -> float:
    """``sum_i w_i f(x_i)``; ``f`` takes an ``(m, d)`` array and returns ``(m,)``.

    Partial sums are taken over fixed chunks and reduced in index order.
    """
    total = 0.0
    for start in range(0, rule.size, _CHUNK):
        stop = min(start + _CHUNK, rule.size)
        vals = np.asarray(f(rule.points[start:stop]), dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(vals)):
            raise FloatingPointError("integrand returned non-finite values")
        total += float(rule.weights[start:stop] @ vals)
    return total
