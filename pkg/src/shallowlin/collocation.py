"""Stacked interior/boundary least-squares systems for collocation."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .activations import NeuronSet, eval_elliptic_op, eval_values
from .assembly import DesignSystem
from .pointsets import sobol_points
from .quadrature import as_box

__all__ = [
    "BoundaryCondition",
    "CollocationSet",
    "tensor_collocation_points",
    "qmc_collocation_points",
    "build_regression_system",
    "build_pde_system",
]


class BoundaryCondition(str, Enum):
    DIRICHLET = "dirichlet"
    NEUMANN_ZERO = "neumann_zero"
    NONE = "none"


def _penalties(lam, size, name):
    lam = np.broadcast_to(np.asarray(lam, dtype=np.float64), (size,)).copy()
    if np.any(lam <= 0):
        raise ValueError(f"{name} penalties must be strictly positive")
    return lam


@dataclass(frozen=True)
class CollocationSet:
    interior: np.ndarray
    boundary: np.ndarray
    lambda_interior: np.ndarray
    lambda_boundary: np.ndarray

    def __post_init__(self):
        xi = np.atleast_2d(np.asarray(self.interior, dtype=np.float64))
        d = xi.shape[1]
        xb = np.asarray(self.boundary, dtype=np.float64).reshape(-1, d)
        if xi.shape[0] < 1:
            raise ValueError("need at least one interior collocation point")
        object.__setattr__(self, "interior", xi)
        object.__setattr__(self, "boundary", xb)
        object.__setattr__(self, "lambda_interior", _penalties(self.lambda_interior, xi.shape[0], "interior"))
        object.__setattr__(self, "lambda_boundary", _penalties(self.lambda_boundary, xb.shape[0], "boundary"))

    @property
    def n_interior(self) -> int:
        return self.interior.shape[0]

    @property
    def n_boundary(self) -> int:
        return self.boundary.shape[0]

    @property
    def all_points(self) -> np.ndarray:
        return np.vstack([self.interior, self.boundary])


def tensor_collocation_points(
    domain,
    per_axis: int,
    include_boundary: bool = True,
    bc=BoundaryCondition.NONE,
    lambda_interior=1.0,
    lambda_boundary=1.0,
) -> CollocationSet:
    """Uniform tensor grid with ``per_axis`` points per axis.

    With a boundary condition active, grid points on a box face form the
    boundary set; otherwise every point is treated as interior. Without
    ``include_boundary`` the grid is the interior of a ``per_axis + 2`` grid.
    """
    box = as_box(domain)
    bc = BoundaryCondition(bc)
    if int(per_axis) != per_axis or per_axis < (2 if include_boundary else 1):
        raise ValueError(f"invalid per_axis {per_axis}")
    if include_boundary:
        axes = [np.linspace(a, b, per_axis) for a, b in box]
    else:
        axes = [np.linspace(a, b, per_axis + 2)[1:-1] for a, b in box]
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.reshape(-1) for g in grids], axis=1)
    if bc is BoundaryCondition.NONE:
        return CollocationSet(pts, np.empty((0, len(box))), lambda_interior, lambda_boundary)
    lo = np.array([a for a, _ in box])
    hi = np.array([b for _, b in box])
    on_face = np.any((pts == lo) | (pts == hi), axis=1)
    return CollocationSet(pts[~on_face], pts[on_face], lambda_interior, lambda_boundary)


def qmc_collocation_points(n: int, domain, skip: int = 1, lambda_interior=1.0) -> CollocationSet:
    """``n`` Sobol points in the box, all interior."""
    box = as_box(domain)
    lo = np.array([a for a, _ in box])
    hi = np.array([b for _, b in box])
    pts = lo + sobol_points(n, len(box), skip) * (hi - lo)
    return CollocationSet(pts, np.empty((0, len(box))), lambda_interior, 1.0)


def _values(f, pts):
    if isinstance(f, np.ndarray):
        vals = f.reshape(-1)
    else:
        vals = np.asarray(f(pts), dtype=np.float64).reshape(-1)
    if vals.shape[0] != pts.shape[0]:
        raise ValueError("function values do not match the number of points")
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite function values at collocation points")
    return vals


def build_regression_system(neurons: NeuronSet, colloc: CollocationSet, u) -> DesignSystem:
    """Discrete l2 fit of ``u`` at every collocation point (interior and boundary)."""
    pts = colloc.all_points
    lam = np.concatenate([colloc.lambda_interior, colloc.lambda_boundary])
    sl = np.sqrt(lam)
    A = eval_values(neurons, pts) * sl[:, None]
    return DesignSystem(A, sl * _values(u, pts), lam)


def build_pde_system(neurons: NeuronSet, colloc: CollocationSet, bc, f, g=None) -> DesignSystem:
    """Rows ``[sqrt(lam_I) D_I ; sqrt(lam_B) D_B]`` for ``-Laplace(u) + u = f``.

    ``D_I`` holds the elliptic operator applied to each neuron at interior
    points; ``D_B`` holds neuron values at boundary points (Dirichlet data
    ``g``).
    """
    bc = BoundaryCondition(bc)
    if bc is BoundaryCondition.NEUMANN_ZERO:
        raise ValueError("collocation supports Dirichlet boundary rows only")
    if (bc is BoundaryCondition.NONE) != (colloc.n_boundary == 0):
        raise ValueError("boundary points must be present exactly when a boundary condition is set")
    si = np.sqrt(colloc.lambda_interior)
    blocks = [eval_elliptic_op(neurons, colloc.interior) * si[:, None]]
    rhs = [si * _values(f, colloc.interior)]
    weights = [colloc.lambda_interior]
    if bc is BoundaryCondition.DIRICHLET:
        if g is None:
            raise ValueError("Dirichlet rows need boundary data g")
        sb = np.sqrt(colloc.lambda_boundary)
        blocks.append(eval_values(neurons, colloc.boundary) * sb[:, None])
        rhs.append(sb * _values(g, colloc.boundary))
        weights.append(colloc.lambda_boundary)
    return DesignSystem(np.vstack(blocks), np.concatenate(rhs), np.concatenate(weights))
