"""Hidden-parameter generators for linearized shallow networks.

Every generator returns a :class:`HiddenParams` holding one row ``(w_j, b_j)``
per neuron. Sphere-based constructions place the stacked vector
``theta_j = (w_j, b_j)`` on a sphere in ``R^{d+1}``; the box and tensor
constructions are used for tanh networks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import erfc

from ._joe_kuo import JOE_KUO, MAX_DIM

__all__ = [
    "Provenance",
    "HiddenParams",
    "RngSpec",
    "circle_grid",
    "fibonacci_sphere",
    "random_sphere",
    "sobol_points",
    "inverse_normal_cdf",
    "qmc_sphere",
    "random_box",
    "petrushev_grid",
    "sphere_scheme",
    "symmetrize",
    "generate",
    "SCHEMES",
]

_SOBOL_BITS = 32
_GOLDEN_ANGLE_FACTOR = math.pi * (1.0 + math.sqrt(5.0))


class Provenance(str, Enum):
    CIRCLE_GRID = "CircleGrid"
    FIBONACCI_SPHERE = "FibonacciSphere"
    RANDOM_SPHERE = "RandomSphere"
    QMC_SPHERE = "QmcSphere"
    RANDOM_BOX = "RandomBox"
    PETRUSHEV_GRID = "PetrushevGrid"
    SPHERE_SCHEME = "SphereScheme"


_SPHERE_PROVENANCES = {
    Provenance.CIRCLE_GRID,
    Provenance.FIBONACCI_SPHERE,
    Provenance.RANDOM_SPHERE,
    Provenance.QMC_SPHERE,
    Provenance.SPHERE_SCHEME,
}


@dataclass(frozen=True)
class HiddenParams:
    """Fixed hidden-layer parameters.

    Attributes
    ----------
    weights : ndarray of shape (n, d)
    biases : ndarray of shape (n,)
    provenance : Provenance
    radius : float or None
        Norm of every stacked ``(w_j, b_j)`` for sphere-derived sets, the box
        half-width for :attr:`Provenance.RANDOM_BOX`, ``None`` otherwise.
    """

    weights: np.ndarray
    biases: np.ndarray
    provenance: Provenance
    radius: float | None = None

    def __post_init__(self):
        w = np.atleast_2d(np.asarray(self.weights, dtype=np.float64))
        b = np.asarray(self.biases, dtype=np.float64).reshape(-1)
        if w.shape[0] != b.shape[0]:
            raise ValueError(
                f"weights and biases disagree in length: {w.shape[0]} != {b.shape[0]}"
            )
        w.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "biases", b)
        object.__setattr__(self, "provenance", Provenance(self.provenance))

    @property
    def n(self) -> int:
        return self.biases.shape[0]

    @property
    def d(self) -> int:
        return self.weights.shape[1]

    @property
    def stacked(self) -> np.ndarray:
        """``(n, d + 1)`` array of ``(w_j, b_j)`` rows."""
        return np.column_stack([self.weights, self.biases])

    @property
    def on_sphere(self) -> bool:
        return self.provenance in _SPHERE_PROVENANCES

    def subset(self, mask) -> "HiddenParams":
        return HiddenParams(self.weights[mask], self.biases[mask], self.provenance, self.radius)

    @classmethod
    def from_stacked(cls, theta, provenance, radius=None) -> "HiddenParams":
        theta = np.asarray(theta, dtype=np.float64)
        return cls(theta[:, :-1].copy(), theta[:, -1].copy(), provenance, radius)


@dataclass(frozen=True)
class RngSpec:
    """Seed plus bit-generator name; equal specs give equal streams."""

    seed: int = 0
    algorithm: str = "PCG64"

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def generator(self) -> np.random.Generator:
        try:
            bitgen = getattr(np.random, self.algorithm)
        except AttributeError:
            raise ValueError(f"unknown bit generator {self.algorithm!r}") from None
        return np.random.Generator(bitgen(int(self.seed)))


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, RngSpec):
        return rng.generator()
    if isinstance(rng, (int, np.integer)):
        return RngSpec(int(rng)).generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngSpec, int seed or Generator, got {type(rng).__name__}")


def _check_count(n, name="n"):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"{name} must be a positive integer, got {n!r}")
    return int(n)


def circle_grid(n: int) -> HiddenParams:
    """``n`` equally spaced points on S^1 at angles ``2*pi*(j + 1/2)/n``."""
    n = _check_count(n)
    alpha = 2.0 * np.pi * (np.arange(n) + 0.5) / n
    return HiddenParams(np.cos(alpha)[:, None], np.sin(alpha), Provenance.CIRCLE_GRID, 1.0)


def fibonacci_sphere(n: int) -> HiddenParams:
    """Golden-spiral grid on S^2; the z-coordinate becomes the bias."""
    n = _check_count(n)
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    polar = np.arccos(z)
    azimuth = _GOLDEN_ANGLE_FACTOR * i
    s = np.sin(polar)
    w = np.column_stack([s * np.cos(azimuth), s * np.sin(azimuth)])
    return HiddenParams(w, z, Provenance.FIBONACCI_SPHERE, 1.0)


def random_sphere(n: int, d: int, rng=None) -> HiddenParams:
    """I.i.d. uniform points on S^d via normalized Gaussian vectors."""
    n = _check_count(n)
    d = _check_count(d, "d")
    gen = _as_rng(RngSpec() if rng is None else rng)
    z = gen.standard_normal((n, d + 1))
    norms = np.linalg.norm(z, axis=1)
    # probability-zero event; redraw rather than divide by zero
    while np.any(norms == 0.0):
        bad = norms == 0.0
        z[bad] = gen.standard_normal((int(bad.sum()), d + 1))
        norms = np.linalg.norm(z, axis=1)
    return HiddenParams.from_stacked(z / norms[:, None], Provenance.RANDOM_SPHERE, 1.0)


def _direction_integers(dim: int) -> np.ndarray:
    """``(dim, _SOBOL_BITS)`` table of direction integers ``v_k = m_k 2^(B-k)``."""
    bits = _SOBOL_BITS
    v = np.zeros((dim, bits), dtype=np.uint64)
    v[0] = [1 << (bits - k - 1) for k in range(bits)]
    for row, (_, s, a, m_init) in zip(range(1, dim), JOE_KUO):
        m = list(m_init)
        for k in range(s, bits):
            new = m[k - s] ^ (m[k - s] << s)
            for i in range(1, s):
                if (a >> (s - 1 - i)) & 1:
                    new ^= m[k - i] << i
            m.append(new)
        v[row] = [m[k] << (bits - k - 1) for k in range(bits)]
    return v


def sobol_points(n: int, dim: int, skip: int = 1) -> np.ndarray:
    """First ``n`` unscrambled Sobol points after discarding ``skip``.

    Points are indexed in Gray-code order, so element ``i`` is the XOR of the
    direction integers selected by the bits of ``i ^ (i >> 1)``.

    Returns
    -------
    ndarray of shape (n, dim), values in [0, 1).
    """
    n = _check_count(n)
    dim = _check_count(dim, "dim")
    if dim > MAX_DIM:
        raise ValueError(f"Sobol dimension {dim} exceeds direction-number table bound {MAX_DIM}")
    if skip < 0 or int(skip) != skip:
        raise ValueError(f"skip must be a nonnegative integer, got {skip!r}")
    if skip + n > 2**_SOBOL_BITS:
        raise ValueError(f"at most 2**{_SOBOL_BITS} Sobol points are available")
    v = _direction_integers(dim)
    idx = np.arange(int(skip), int(skip) + n, dtype=np.uint64)
    gray = idx ^ (idx >> np.uint64(1))
    x = np.zeros((n, dim), dtype=np.uint64)
    for k in range(_SOBOL_BITS):
        sel = ((gray >> np.uint64(k)) & np.uint64(1)).astype(bool)
        if not sel.any():
            break
        x[sel] ^= v[:, k]
    return x.astype(np.float64) / float(2**_SOBOL_BITS)


# Acklam's rational approximation; refined below with one Halley step.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def _horner(coeffs, x):
    out = np.full_like(x, coeffs[0])
    for c in coeffs[1:]:
        out = out * x + c
    return out


def _lower_half_quantile(p):
    """Quantile for ``0 < p <= 0.5``; always returns ``z <= 0``."""
    z = np.empty_like(p)
    tail = p < _P_LOW
    mid = ~tail
    if tail.any():
        q = np.sqrt(-2.0 * np.log(p[tail]))
        z[tail] = _horner(_C, q) / (_horner(_D, q) * q + 1.0)
    if mid.any():
        q = p[mid] - 0.5
        r = q * q
        z[mid] = q * _horner(_A, r) / (_horner(_B, r) * r + 1.0)
    # Halley refinement against the erfc-based CDF
    e = 0.5 * erfc(-z / math.sqrt(2.0)) - p
    u = e * math.sqrt(2.0 * math.pi) * np.exp(0.5 * z * z)
    return z - u / (1.0 + 0.5 * z * u)


def inverse_normal_cdf(u):
    """Standard normal quantile, accurate to ``|Phi(z) - u| <= 1e-12``.

    The upper half is computed by reflection so that the output is exactly
    antisymmetric about ``u = 0.5``.
    """
    arr = np.asarray(u, dtype=np.float64)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise ValueError("inverse_normal_cdf requires 0 < u < 1")
    flat = arr.reshape(-1)
    out = np.empty_like(flat)
    lower = flat <= 0.5
    if lower.any():
        out[lower] = _lower_half_quantile(flat[lower])
    if (~lower).any():
        out[~lower] = -_lower_half_quantile(1.0 - flat[~lower])
    out = out.reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def qmc_sphere(n: int, d: int, eps: float = 1e-10, skip: int = 1) -> HiddenParams:
    """Sobol points pushed through the Gaussian quantile and normalized onto S^d.

    A sequence element whose Gaussian image has norm below 1e-14 (the cube
    midpoint) is dropped and the next element takes its place.
    """
    n = _check_count(n)
    d = _check_count(d, "d")
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    want, extra = n, 4
    while True:
        u = sobol_points(want + extra, d + 1, skip)
        z = inverse_normal_cdf(np.clip(u, eps, 1.0 - eps))
        norms = np.linalg.norm(z, axis=1)
        keep = norms >= 1e-14
        if keep.sum() >= want:
            z, norms = z[keep][:want], norms[keep][:want]
            break
        extra *= 2
    return HiddenParams.from_stacked(z / norms[:, None], Provenance.QMC_SPHERE, 1.0)


def random_box(n: int, d: int, R: float, rng=None) -> HiddenParams:
    """I.i.d. uniform ``(w_j, b_j)`` on ``[-R, R]^{d+1}``."""
    n = _check_count(n)
    d = _check_count(d, "d")
    if not R > 0:
        raise ValueError(f"R must be positive, got {R}")
    gen = _as_rng(RngSpec() if rng is None else rng)
    theta = gen.uniform(-R, R, size=(n, d + 1))
    return HiddenParams.from_stacked(theta, Provenance.RANDOM_BOX, float(R))


def _unit_sphere_grid(n, d):
    """Quasi-uniform grid on S^{d} for d in {0, 1, 2}, as ``(n, d+1)`` rows."""
    if d == 0:
        if n != 2:
            raise ValueError("S^0 has exactly two points; n1 must be 2 when d = 1")
        return np.array([[-1.0], [1.0]])
    if d == 1:
        return circle_grid(n).stacked
    if d == 2:
        return fibonacci_sphere(n).stacked
    raise ValueError(f"no quasi-uniform grid available on S^{d}")


def petrushev_grid(n1: int, n2: int, r1: float, r2: float, d: int) -> HiddenParams:
    """Tensor product of a radius-``r1`` grid on S^{d-1} with ``n2`` biases in [-r2, r2].

    Rows are ordered direction-major: all biases for the first direction,
    then all biases for the second, and so on.
    """
    n1 = _check_count(n1, "n1")
    n2 = _check_count(n2, "n2")
    d = _check_count(d, "d")
    if d > 3:
        raise ValueError("petrushev_grid supports d <= 3 only")
    if not (r1 > 0 and r2 > 0):
        raise ValueError("radii r1, r2 must be positive")
    dirs = r1 * _unit_sphere_grid(n1, d - 1)
    biases = np.linspace(-r2, r2, n2) if n2 > 1 else np.zeros(1)
    w = np.repeat(dirs, n2, axis=0)
    b = np.tile(biases, n1)
    return HiddenParams(w, b, Provenance.PETRUSHEV_GRID, None)


def sphere_scheme(n: int, d: int, r: float, eps: float = 1e-10) -> HiddenParams:
    """Quasi-uniform grid on ``r * S^d``; QMC points stand in for d >= 3."""
    n = _check_count(n)
    d = _check_count(d, "d")
    if not r > 0:
        raise ValueError(f"r must be positive, got {r}")
    if d <= 2:
        theta = _unit_sphere_grid(n, d)
    else:
        theta = qmc_sphere(n, d, eps=eps).stacked
    return HiddenParams.from_stacked(r * theta, Provenance.SPHERE_SCHEME, float(r))


def symmetrize(params: HiddenParams) -> HiddenParams:
    """Append the antipodal set ``-theta_j``; doubles the neuron count."""
    theta = params.stacked
    return HiddenParams.from_stacked(np.vstack([theta, -theta]), params.provenance, params.radius)


SCHEMES = (
    "circle",
    "fibonacci",
    "quasi_uniform",
    "random_sphere",
    "qmc_sphere",
    "random_box",
    "petrushev",
    "sphere_scheme",
)


def generate(scheme: str, n: int, d: int, rng=None, **params) -> HiddenParams:
    """Build ``n`` hidden parameters for input dimension ``d`` by scheme name.

    ``quasi_uniform`` picks the circle grid for d = 1, the Fibonacci sphere
    for d = 2 and QMC points beyond. Petrushev grids take ``n2`` bias levels
    (default: ``n // 2`` when d = 1, else ``round(sqrt(n))``) and
    ``n1 = n // n2`` directions.
    """
    if scheme == "circle":
        if d != 1:
            raise ValueError("circle grid parametrizes d = 1 only")
        return circle_grid(n)
    if scheme == "fibonacci":
        if d != 2:
            raise ValueError("Fibonacci sphere parametrizes d = 2 only")
        return fibonacci_sphere(n)
    if scheme == "quasi_uniform":
        if d == 1:
            return circle_grid(n)
        if d == 2:
            return fibonacci_sphere(n)
        return qmc_sphere(n, d, **_pick(params, "eps", "skip"))
    if scheme == "random_sphere":
        return random_sphere(n, d, rng)
    if scheme == "qmc_sphere":
        return qmc_sphere(n, d, **_pick(params, "eps", "skip"))
    if scheme == "random_box":
        return random_box(n, d, float(params.get("R", 1.0)), rng)
    if scheme == "petrushev":
        n2 = params.get("n2")
        if n2 is None:
            n2 = max(n // 2, 1) if d == 1 else max(int(round(math.sqrt(n))), 1)
        n1 = 2 if d == 1 else max(n // int(n2), 1)
        r = float(params.get("r", 1.0))
        return petrushev_grid(n1, int(n2), float(params.get("r1", r)), float(params.get("r2", r)), d)
    if scheme == "sphere_scheme":
        return sphere_scheme(n, d, float(params.get("r", 1.0)), **_pick(params, "eps"))
    raise ValueError(f"unknown point-set scheme {scheme!r}; choose from {', '.join(SCHEMES)}")


def _pick(params, *keys):
    return {k: params[k] for k in keys if k in params}
