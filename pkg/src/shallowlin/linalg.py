"""Dense solvers and conditioning diagnostics."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

__all__ = [
    "SolveReport",
    "svd_lstsq",
    "solve_spd",
    "condition_number",
    "loglog_slope",
    "singular_values",
]


@dataclass(frozen=True)
class SolveReport:
    coefficients: np.ndarray
    singular_values: np.ndarray
    rank: int
    condition_number: float
    residual_norm: float
    method: str
    flags: tuple = field(default=())


def _cond_from_spectrum(s):
    if s.size == 0 or s[0] == 0.0:
        return float("inf")
    return float("inf") if s[-1] == 0.0 else float(s[0] / s[-1])


def _svd(a):
    try:
        return sla.svd(a, full_matrices=False, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        # gesdd occasionally fails to converge where gesvd succeeds
        return sla.svd(a, full_matrices=False, lapack_driver="gesvd")


def svd_lstsq(A, y, rcond: float | None = None) -> SolveReport:
    """Minimal-norm least-squares solution with singular values below
    ``rcond * sigma_max`` discarded.

    ``rcond`` defaults to ``eps * max(m, n)``.
    """
    A = np.asarray(A, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if A.ndim != 2 or A.shape[0] != y.shape[0]:
        raise ValueError(f"shape mismatch: A {A.shape}, y {y.shape}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(y))):
        raise ValueError("svd_lstsq requires finite inputs")
    m, n = A.shape
    if rcond is None:
        rcond = np.finfo(np.float64).eps * max(m, n)
    if rcond < 0:
        raise ValueError("rcond must be nonnegative")
    U, s, Vt = _svd(A)
    keep = s > rcond * s[0] if s.size and s[0] > 0 else np.zeros_like(s, dtype=bool)
    rank = int(keep.sum())
    coef = Vt[:rank].T @ ((U[:, :rank].T @ y) / s[:rank])
    resid = float(np.linalg.norm(A @ coef - y))
    return SolveReport(coef, s, rank, _cond_from_spectrum(s), resid, "SvdLstsq")


def solve_spd(M, b, *, symmetry_tol: float = 1e-10, spectrum: bool = True) -> SolveReport:
    """Cholesky solve of a symmetric (semi)definite system.

    When Cholesky breaks down on a numerically indefinite matrix the solve
    falls back to a symmetric-indefinite (Bunch-Kaufman) factorization and
    the report carries the flag ``"indefinite_fallback"``.
    """
    M = np.asarray(M, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] != b.shape[0]:
        raise ValueError(f"shape mismatch: M {M.shape}, b {b.shape}")
    scale = np.abs(M).max()
    if scale == 0.0:
        raise np.linalg.LinAlgError("matrix is exactly zero")
    if np.abs(M - M.T).max() > symmetry_tol * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    flags = ()
    try:
        c = sla.cho_factor(M, lower=True, check_finite=True)
        a = sla.cho_solve(c, b)
    except np.linalg.LinAlgError:
        flags = ("indefinite_fallback",)
        with warnings.catch_warnings():
            # ill-conditioning is reported through the diagnostics instead
            warnings.simplefilter("ignore", sla.LinAlgWarning)
            a = sla.solve(M, b, assume_a="sym")
    if spectrum:
        s = np.sort(np.abs(np.linalg.eigvalsh(M)))[::-1]
    else:
        s = np.empty(0)
    tol = np.finfo(np.float64).eps * M.shape[0] * (s[0] if s.size else scale)
    rank = int((s > tol).sum()) if s.size else M.shape[0]
    resid = float(np.linalg.norm(M @ a - b))
    return SolveReport(a, s, rank, _cond_from_spectrum(s), resid, "SymmetricDirect", flags)


def singular_values(M) -> np.ndarray:
    """Full singular spectrum, descending."""
    return sla.svdvals(np.asarray(M, dtype=np.float64))


def condition_number(M) -> float:
    """``sigma_max / sigma_min`` from the full SVD; ``inf`` if ``sigma_min == 0``."""
    s = singular_values(M)
    if s.size == 0 or s[0] == 0.0:
        raise ValueError("condition number of a zero matrix is undefined")
    return _cond_from_spectrum(s)


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    x = np.asarray(xs, dtype=np.float64).reshape(-1)
    y = np.asarray(ys, dtype=np.float64).reshape(-1)
    if x.shape != y.shape or x.size < 2:
        raise ValueError("need at least two (x, y) pairs of equal length")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("loglog_slope needs strictly positive data")
    lx, ly = np.log(x), np.log(y)
    lx = lx - lx.mean()
    denom = lx @ lx
    if denom == 0.0:
        raise ValueError("all x values are equal")
    return float(lx @ (ly - ly.mean()) / denom)
