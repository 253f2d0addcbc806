"""``lab`` command line: run, condition, pointset, spectrum, presets.

Exit status is 2 for configuration errors and 0 otherwise; numerical
instability is reported inside the CSV, not through the exit code.
"""

from __future__ import annotations

import argparse
import io as _io
import sys
from datetime import datetime, timezone

from ..io import pointset_csv, write_spectrum_csv
from ..pointsets import SCHEMES, RngSpec, generate
from ..targets import _num, parse_key
from .config import ConfigError, list_presets, load_config
from .runner import condition_study, run, spectrum

EXIT_CONFIG = 2


def _emit(text, out):
    if out in (None, "-", "csv"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _stamp(args):
    if not args.timestamp:
        return None
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def _cmd_run(args):
    cfg = load_config(args.config, args.paper_scale)
    res = run(cfg, args.paper_scale)
    _emit(res.to_csv(timing=args.timing, timestamp=_stamp(args)), args.out)


def _cmd_condition(args):
    cfg = load_config(args.config, args.paper_scale)
    _emit(condition_study(cfg, args.paper_scale).to_csv(_stamp(args)), args.out)


def _cmd_spectrum(args):
    cfg = load_config(args.config, args.paper_scale)
    sigma, info = spectrum(cfg, args.n, args.seed)
    comment = (f"singular values of the {cfg.condition_matrix} matrix, descending; config={cfg.name} "
               f"hash={cfg.digest()} n={info['n']} n_active={info['n_active']} seed={info['seed']}")
    if info["radius"] is not None:
        comment += f" radius={info['radius']:g}"
    stamp = _stamp(args)
    if stamp:
        comment += f" timestamp={stamp}"
    buf = _io.StringIO()
    write_spectrum_csv(buf, sigma, comment)
    _emit(buf.getvalue(), args.out)


def _parse_pointset_spec(text):
    try:
        scheme, raw = parse_key(text)
        params = {k: _num(v[0]) if len(v) == 1 else [_num(x) for x in v] for k, v in raw.items()}
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if scheme not in SCHEMES:
        raise ConfigError(f"unknown scheme {scheme!r}; choose from {', '.join(SCHEMES)}")
    for key in ("n", "d"):
        if key not in params:
            raise ConfigError(f"pointset spec needs {key}=...")
    n, d = params.pop("n"), params.pop("d")
    seed = params.pop("seed", 0)
    if not all(isinstance(v, int) for v in (n, d, seed)):
        raise ConfigError("n, d and seed must be integers")
    return scheme, int(n), int(d), int(seed), params


def _cmd_pointset(args):
    scheme, n, d, seed, params = _parse_pointset_spec(args.spec)
    try:
        hp = generate(scheme, n, d, RngSpec(seed).generator(), **params)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None
    _emit(pointset_csv(hp), args.out)


def _cmd_presets(args):
    for name in list_presets():
        print(name)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lab", description="Linearized shallow network experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("config", help="TOML file or preset name")
        sp.add_argument("--paper-scale", action="store_true", help="apply the [paper_scale] overrides")
        sp.add_argument("--out", default=None, help="output path (default: stdout)")
        sp.add_argument("--timestamp", action="store_true", help="add a UTC timestamp to the header")

    sp = sub.add_parser("run", help="convergence sweep over the neuron counts")
    common(sp)
    sp.add_argument("--timing", action="store_true", help="add a wall_time column")
    sp.set_defaults(func=_cmd_run)

    sp = sub.add_parser("condition", help="condition numbers over the neuron counts")
    common(sp)
    sp.set_defaults(func=_cmd_condition)

    sp = sub.add_parser("spectrum", help="singular values at one neuron count")
    common(sp)
    sp.add_argument("--n", type=int, default=None, help="neuron count (default: spectrum_n or the largest)")
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=_cmd_spectrum)

    sp = sub.add_parser("pointset", help="write hidden parameters, e.g. 'sphere_scheme:n=128,d=1,r=8'")
    sp.add_argument("spec")
    sp.add_argument("--out", default="csv", help="'csv' for stdout or an output path")
    sp.set_defaults(func=_cmd_pointset)

    sp = sub.add_parser("presets", help="list bundled presets")
    sp.set_defaults(func=_cmd_presets)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"lab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
