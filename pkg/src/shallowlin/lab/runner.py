"""Convergence sweeps, condition-number studies and spectrum export."""

from __future__ import annotations

import io as _io
import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..activations import Activation, NeuronSet, prune_neurons
from ..assembly import energy_matrix, load_vector, mass_matrix, variational_lstsq_system
from ..collocation import (
    BoundaryCondition,
    build_pde_system,
    build_regression_system,
    qmc_collocation_points,
    tensor_collocation_points,
)
from ..linalg import condition_number, loglog_slope, singular_values, solve_spd, svd_lstsq
from ..pointsets import RngSpec, generate, symmetrize
from ..quadrature import piecewise_tensor_rule, qmc_rule
from ..targets import parse_target
from .config import ExperimentConfig
from .errors import errors

__all__ = [
    "UNSTABLE",
    "ConvergenceRow",
    "ConvergenceTable",
    "RunResult",
    "ConditionResult",
    "run",
    "condition_study",
    "spectrum",
    "pairwise_orders",
    "geometric_mean_table",
]

UNSTABLE = "unstable"
FIRST_ORDER = "*"

# failures that mark a row unstable instead of aborting the sweep
_NUMERICAL = (np.linalg.LinAlgError, FloatingPointError, ValueError, MemoryError)


@dataclass
class ConvergenceRow:
    n: int
    n_active: float
    l2: float = math.nan
    h1: float = math.nan
    cond: float = math.nan
    wall_time: float = 0.0
    status: str = "ok"
    flags: tuple = ()

    @property
    def stable(self) -> bool:
        return self.status == "ok"


def pairwise_orders(ns, es):
    """``log(e[i-1]/e[i]) / log(n[i]/n[i-1])``; ``None`` where undefined."""
    out = [None]
    for i in range(1, len(es)):
        a, b = es[i - 1], es[i]
        ok = all(v is not None and np.isfinite(v) and v > 0 for v in (a, b)) and ns[i] != ns[i - 1]
        out.append(math.log(a / b) / math.log(ns[i] / ns[i - 1]) if ok else None)
    return out


@dataclass
class ConvergenceTable:
    """Rows of one sweep over n; ``seed`` is an int or ``"geomean"``."""

    radius: float | None
    seed: object
    rows: list = field(default_factory=list)

    def _column(self, name):
        return [getattr(r, name) if r.stable else None for r in self.rows]

    def orders(self, name="l2"):
        # orders follow the active neuron count, which is what the basis spans
        return pairwise_orders([r.n_active for r in self.rows], self._column(name))

    def fitted_order(self, name="l2") -> float:
        """Negated least-squares slope of log error against log n_active."""
        pts = [(r.n_active, getattr(r, name)) for r in self.rows if r.stable and getattr(r, name) > 0]
        if len(pts) < 2:
            return math.nan
        xs, ys = zip(*pts)
        return -loglog_slope(xs, ys)

    def errors(self, name="l2"):
        return np.array([getattr(r, name) if r.stable else np.nan for r in self.rows])


def _fmt(x, spec=".12e"):
    if x is None:
        return FIRST_ORDER
    if isinstance(x, str):
        return x
    return format(float(x), spec)


def _fmt_n(x):
    return str(int(x)) if float(x).is_integer() else format(float(x), ".6g")


@dataclass
class RunResult:
    config: ExperimentConfig
    tables: list
    paper_scale: bool = False

    def table(self, seed=None, radius=None) -> ConvergenceTable:
        for t in self.tables:
            if (seed is None or t.seed == seed) and (radius is None or t.radius == radius):
                return t
        raise KeyError(f"no table for seed={seed}, radius={radius}")

    def to_csv(self, timing: bool = False, timestamp: str | None = None) -> str:
        buf = _io.StringIO()
        _header(buf, self.config, self.paper_scale, timestamp)
        cols = ["radius", "seed", "n", "n_active", "l2", "l2_order", "h1", "h1_order", "cond"]
        if timing:
            cols.append("wall_time")
        buf.write(",".join(cols) + "\n")
        for t in self.tables:
            o2, o1 = t.orders("l2"), t.orders("h1")
            for i, r in enumerate(t.rows):
                cells = [_fmt_radius(t.radius), str(t.seed), str(r.n), _fmt_n(r.n_active)]
                if r.stable:
                    cells += [_fmt(r.l2), _fmt(o2[i], ".6f"), _fmt(r.h1), _fmt(o1[i], ".6f"), _fmt(r.cond, ".6e")]
                else:
                    cells += [UNSTABLE, FIRST_ORDER, UNSTABLE, FIRST_ORDER, UNSTABLE]
                if timing:
                    cells.append(format(r.wall_time, ".3f"))
                buf.write(",".join(cells) + "\n")
        return buf.getvalue()


def _fmt_radius(r):
    return "" if r is None else format(float(r), "g")


def _header(buf, cfg, paper_scale, timestamp, extra=()):
    buf.write(f"# config={cfg.name} hash={cfg.digest()}\n")
    buf.write(f"# problem={cfg.problem} activation={cfg.activation} target={cfg.target} "
              f"scheme={cfg.pointset['scheme']} paper_scale={str(paper_scale).lower()}\n")
    buf.write(f"# seeds={' '.join(map(str, cfg.seeds))}\n")
    for line in extra:
        buf.write(f"# {line}\n")
    if timestamp is not None:
        buf.write(f"# timestamp={timestamp}\n")


# -- pipeline pieces ---------------------------------------------------------


def _domain(d):
    return [(-1.0, 1.0)] * d


def _rule(spec, d):
    if spec["kind"] == "gauss":
        return piecewise_tensor_rule(_domain(d), int(spec["cells"]), int(spec["order"]))
    return qmc_rule(int(spec["points"]), _domain(d), int(spec.get("skip", 1)))


def _colloc(spec, d, bc):
    li, lb = float(spec.get("penalty_interior", 1.0)), float(spec.get("penalty_boundary", 1.0))
    if spec["kind"] == "tensor":
        return tensor_collocation_points(
            _domain(d), int(spec["per_axis"]), bool(spec.get("include_boundary", True)), bc, li, lb
        )
    if bc is not BoundaryCondition.NONE:
        raise ValueError("qmc collocation has no boundary points")
    return qmc_collocation_points(int(spec["points"]), _domain(d), int(spec.get("skip", 1)), li)


def _radius_params(scheme, params, radius):
    p = {k: v for k, v in params.items() if k not in ("scheme", "symmetric")}
    if radius is not None:
        p["R" if scheme == "random_box" else "r"] = radius
    return p


def _neurons(cfg, n, seed, radius):
    scheme = cfg.pointset["scheme"]
    params = generate(scheme, n, cfg.dim, RngSpec(seed).generator(),
                      **_radius_params(scheme, cfg.pointset, radius))
    if cfg.pointset.get("symmetric", False):
        # generate n, then append the antipodes, so 2n neurons in total
        params = symmetrize(params)
    ns = NeuronSet(Activation.parse(cfg.activation), params)
    return prune_neurons(ns, _domain(cfg.dim), cfg.prune)


class _Context:
    """Rules and collocation sets shared by every row of a run."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.target = parse_target(cfg.target)
        self._cache = {}

    def rule(self, which="quadrature"):
        spec = getattr(self.cfg, which)
        key = ("rule", repr(sorted(spec.items())))
        if key not in self._cache:
            self._cache[key] = _rule(spec, self.cfg.dim)
        return self._cache[key]

    def colloc(self):
        if "colloc" not in self._cache:
            bc = BoundaryCondition(self.cfg.collocation.get("bc", "none"))
            self._cache["colloc"] = (_colloc(self.cfg.collocation, self.cfg.dim, bc), bc)
        return self._cache["colloc"]

    def solve(self, neurons):
        cfg, u = self.cfg, self.target
        if cfg.problem == "l2min_variational":
            rule = self.rule()
            if cfg.solver == "direct":
                return solve_spd(mass_matrix(neurons, rule), load_vector(neurons, rule, u.value))
            sys_ = variational_lstsq_system(neurons, rule, u.value)
            return svd_lstsq(sys_.matrix, sys_.rhs, cfg.rcond)
        if cfg.problem == "elliptic_variational":
            rule = self.rule()
            return solve_spd(energy_matrix(neurons, rule),
                             load_vector(neurons, rule, u.elliptic_rhs, "EnergyH1"))
        colloc, bc = self.colloc()
        if cfg.problem == "l2_regression":
            sys_ = build_regression_system(neurons, colloc, u.value)
        else:
            sys_ = build_pde_system(neurons, colloc, bc, u.elliptic_rhs, u.value)
        return svd_lstsq(sys_.matrix, sys_.rhs, cfg.rcond)

    def matrix(self, neurons, kind):
        cfg = self.cfg
        which = "quadrature" if cfg.quadrature else "error_quadrature"
        if kind == "mass":
            return mass_matrix(neurons, self.rule(which))
        if kind == "energy":
            return energy_matrix(neurons, self.rule(which))
        if cfg.problem in ("l2min_variational", "elliptic_variational"):
            return variational_lstsq_system(neurons, self.rule(which), self.target.value).matrix
        colloc, bc = self.colloc()
        if cfg.problem == "l2_regression":
            return build_regression_system(neurons, colloc, self.target.value).matrix
        return build_pde_system(neurons, colloc, bc, self.target.elliptic_rhs, self.target.value).matrix


def _row(ctx, n, seed, radius):
    t0 = time.perf_counter()
    row = ConvergenceRow(n=n, n_active=n)
    try:
        neurons = _neurons(ctx.cfg, n, seed, radius)
        row.n_active = neurons.n
        if neurons.n == 0:
            raise ValueError("every neuron was pruned")
        with np.errstate(over="raise", invalid="raise"):
            rep = ctx.solve(neurons)
            l2, h1 = errors(ctx.target, neurons, rep.coefficients, ctx.rule("error_quadrature"))
        if not (np.isfinite(l2) and np.isfinite(h1)):
            raise FloatingPointError("non-finite error norm")
        row.l2, row.h1, row.cond, row.flags = l2, h1, rep.condition_number, rep.flags
    except _NUMERICAL:
        row.status = UNSTABLE
    row.wall_time = time.perf_counter() - t0
    return row


def _sweep_keys(cfg):
    radii = cfg.radii or [None]
    return [(r, s) for r in radii for s in cfg.seeds]


def geometric_mean_table(tables, radius=None) -> ConvergenceTable:
    """Per-n geometric mean over seeds; any unstable seed makes the row unstable."""
    out = ConvergenceTable(radius, "geomean")
    for rows in zip(*(t.rows for t in tables)):
        g = ConvergenceRow(n=rows[0].n, n_active=_gmean([r.n_active for r in rows]))
        if all(r.stable for r in rows):
            g.l2, g.h1, g.cond = (_gmean([getattr(r, k) for r in rows]) for k in ("l2", "h1", "cond"))
            g.wall_time = sum(r.wall_time for r in rows)
        else:
            g.status = UNSTABLE
        out.rows.append(g)
    return out


def _gmean(vals):
    vals = np.asarray(vals, dtype=np.float64)
    if np.any(vals <= 0):
        return 0.0 if np.all(vals >= 0) else math.nan
    return float(np.exp(np.mean(np.log(vals))))


def run(cfg: ExperimentConfig, paper_scale: bool = False) -> RunResult:
    """Sweep every (radius, seed) over the neuron counts of ``cfg``.

    Random schemes with several seeds also get a ``"geomean"`` table per
    radius.
    """
    ctx = _Context(cfg)
    tables = []
    for radius in cfg.radii or [None]:
        group = []
        for seed in cfg.seeds:
            t = ConvergenceTable(radius, seed, [_row(ctx, int(n), seed, radius) for n in cfg.neurons])
            group.append(t)
        tables.extend(group)
        if len(group) > 1:
            tables.append(geometric_mean_table(group, radius))
    return RunResult(cfg, tables, paper_scale)


@dataclass
class ConditionResult:
    config: ExperimentConfig
    # (radius, seed) -> list of (n, n_active, cond)
    series: dict
    paper_scale: bool = False

    def slope(self, radius=None, seed="geomean") -> float:
        pts = [(na, c) for _, na, c in self.series[(radius, seed)] if np.isfinite(c) and c > 0]
        xs, ys = zip(*pts)
        return loglog_slope(xs, ys)

    def conds(self, radius=None, seed="geomean") -> np.ndarray:
        return np.array([c for _, _, c in self.series[(radius, seed)]])

    def to_csv(self, timestamp: str | None = None) -> str:
        buf = _io.StringIO()
        extra = []
        for key in self.series:
            try:
                s = format(self.slope(*key), ".6f")
            except ValueError:
                s = "nan"
            extra.append(f"loglog_slope radius={_fmt_radius(key[0]) or '-'} seed={key[1]} value={s}")
        extra.append(f"matrix={self.config.condition_matrix}")
        _header(buf, self.config, self.paper_scale, timestamp, extra)
        buf.write("radius,seed,n,n_active,cond\n")
        for (radius, seed), rows in self.series.items():
            for n, na, c in rows:
                cell = format(c, ".12e") if np.isfinite(c) else UNSTABLE
                buf.write(f"{_fmt_radius(radius)},{seed},{n},{_fmt_n(na)},{cell}\n")
        return buf.getvalue()


def _cond_entry(ctx, n, seed, radius):
    try:
        neurons = _neurons(ctx.cfg, n, seed, radius)
        if neurons.n == 0:
            return n, 0, math.nan
        with np.errstate(over="raise", invalid="raise"):
            c = condition_number(ctx.matrix(neurons, ctx.cfg.condition_matrix))
        return n, neurons.n, c
    except _NUMERICAL:
        return n, n, math.nan


def condition_study(cfg: ExperimentConfig, paper_scale: bool = False) -> ConditionResult:
    """Condition numbers of ``cfg.condition_matrix`` over the n-sweep."""
    ctx = _Context(cfg)
    series = {}
    for radius in cfg.radii or [None]:
        for seed in cfg.seeds:
            series[(radius, seed)] = [_cond_entry(ctx, int(n), seed, radius) for n in cfg.neurons]
        if len(cfg.seeds) > 1:
            cols = list(zip(*(series[(radius, s)] for s in cfg.seeds)))
            series[(radius, "geomean")] = [
                (c[0][0], _gmean([e[1] for e in c]), _gmean([e[2] for e in c]) if all(np.isfinite(e[2]) for e in c) else math.nan)
                for c in cols
            ]
    return ConditionResult(cfg, series, paper_scale)


def spectrum(cfg: ExperimentConfig, n: int | None = None, seed=None, radius=None):
    """Singular values (descending) of ``cfg.condition_matrix`` at one n."""
    ctx = _Context(cfg)
    n = int(n or cfg.spectrum_n or cfg.neurons[-1])
    seed = cfg.seeds[0] if seed is None else seed
    if radius is None and cfg.radii:
        radius = cfg.radii[0]
    neurons = _neurons(cfg, n, seed, radius)
    return singular_values(ctx.matrix(neurons, cfg.condition_matrix)), dict(n=n, n_active=neurons.n, seed=seed, radius=radius)
