"""Exact solutions with closed-form derivatives on the box ``(-1, 1)^d``.

Targets are addressable by string key, e.g. ``"prod_sin_half_pi:d=3"``,
``"sin_m:m=2,d=1"`` or ``"sum_sin_m:d=1,m=1,2,4"`` (bare values extend the
preceding key into a list).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TargetFunction",
    "ProdSinHalfPi",
    "SinM",
    "SumSinM",
    "parse_target",
    "parse_key",
]


def _pts(x, d):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(-1, 1) if d == 1 else x.reshape(1, -1)
    if x.shape[1] != d:
        raise ValueError(f"points must have {d} columns, got shape {x.shape}")
    return x


class TargetFunction:
    """Separable sums of ``prod_a sin(c * x_a)`` terms.

    Subclasses supply ``terms``: a list of ``(amplitude, frequency)`` pairs.
    Each term is ``amplitude * prod_a sin(frequency * x_a)``.
    """

    d: int
    domain: tuple
    terms: list
    key: str

    def value(self, x):
        x = _pts(x, self.d)
        out = np.zeros(x.shape[0])
        for amp, c in self.terms:
            out += amp * np.prod(np.sin(c * x), axis=1)
        return out

    def gradient(self, x):
        x = _pts(x, self.d)
        out = np.zeros_like(x)
        for amp, c in self.terms:
            s, dc = np.sin(c * x), c * np.cos(c * x)
            for a in range(self.d):
                f = s.copy()
                f[:, a] = dc[:, a]
                out[:, a] += amp * np.prod(f, axis=1)
        return out

    def laplacian(self, x):
        x = _pts(x, self.d)
        out = np.zeros(x.shape[0])
        for amp, c in self.terms:
            out -= self.d * c * c * amp * np.prod(np.sin(c * x), axis=1)
        return out

    def elliptic_rhs(self, x):
        """``f = -Laplace(u) + u``."""
        return self.value(x) - self.laplacian(x)

    def __call__(self, x):
        return self.value(x)

    def __repr__(self):
        return f"{type(self).__name__}({self.key!r})"


@dataclass(repr=False)
class ProdSinHalfPi(TargetFunction):
    """``prod_a sin(pi x_a / 2)``: zero normal derivative on the box faces."""

    d: int = 1

    def __post_init__(self):
        self.domain = ((-1.0, 1.0),) * self.d
        self.terms = [(1.0, 0.5 * math.pi)]
        self.key = f"prod_sin_half_pi:d={self.d}"

    @property
    def l2_norm(self) -> float:
        return 1.0

    @property
    def h1_seminorm(self) -> float:
        return 0.5 * math.pi * math.sqrt(self.d)


@dataclass(repr=False)
class SinM(TargetFunction):
    """``prod_a sin(m pi x_a)``."""

    m: int = 1
    d: int = 1

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("frequency m must be a positive integer")
        self.domain = ((-1.0, 1.0),) * self.d
        self.terms = [(1.0, self.m * math.pi)]
        self.key = f"sin_m:m={self.m},d={self.d}"

    @property
    def l2_norm(self) -> float:
        return 1.0

    @property
    def h1_seminorm(self) -> float:
        return self.m * math.pi * math.sqrt(self.d)


@dataclass(repr=False)
class SumSinM(TargetFunction):
    """``sum_i prod_a sin(m_i pi x_a)`` for distinct positive ``m_i``."""

    ms: tuple = (1, 2, 4)
    d: int = 1

    def __post_init__(self):
        self.ms = tuple(int(m) for m in self.ms)
        if len(set(self.ms)) != len(self.ms) or min(self.ms) < 1:
            raise ValueError("frequencies must be distinct positive integers")
        self.domain = ((-1.0, 1.0),) * self.d
        self.terms = [(1.0, m * math.pi) for m in self.ms]
        self.key = "sum_sin_m:d={},m={}".format(self.d, ",".join(map(str, self.ms)))

    # distinct integer frequencies are orthogonal on (-1, 1)
    @property
    def l2_norm(self) -> float:
        return math.sqrt(len(self.ms))

    @property
    def h1_seminorm(self) -> float:
        return math.pi * math.sqrt(self.d * sum(m * m for m in self.ms))


def parse_key(text: str) -> tuple[str, dict]:
    """Split ``"name:k=v,k=v,..."``; a bare token appends to the previous key."""
    name, _, rest = text.strip().partition(":")
    args: dict = {}
    last = None
    for tok in filter(None, (t.strip() for t in rest.split(","))):
        if "=" in tok:
            last, _, val = tok.partition("=")
            last = last.strip()
            args[last] = [val.strip()]
        elif last is None:
            raise ValueError(f"malformed key {text!r}")
        else:
            args[last].append(tok)
    return name.strip(), args


def _num(v):
    f = float(v)
    return int(f) if f.is_integer() and "." not in v and "e" not in v.lower() else f


def parse_target(text: str) -> TargetFunction:
    name, args = parse_key(text)
    scalar = {k: _num(v[0]) for k, v in args.items() if len(v) == 1}
    d = int(scalar.get("d", 1))
    if name == "prod_sin_half_pi":
        return ProdSinHalfPi(d=d)
    if name == "sin_m":
        return SinM(m=int(scalar.get("m", 1)), d=d)
    if name == "sum_sin_m":
        ms = args.get("m", ["1", "2", "4"])
        return SumSinM(ms=tuple(int(m) for m in ms), d=d)
    raise ValueError(f"unknown target {name!r}")
