"""Experiment configuration documents (TOML, versioned schema)."""

from __future__ import annotations

import copy
import hashlib
import json
import sys
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..activations import Activation
from ..pointsets import SCHEMES
from ..targets import parse_target

__all__ = [
    "SCHEMA_VERSION",
    "PROBLEMS",
    "ConfigError",
    "ExperimentConfig",
    "load_config",
    "list_presets",
]

SCHEMA_VERSION = 1
PROBLEMS = ("l2min_variational", "l2_regression", "elliptic_variational", "elliptic_collocation")
_VARIATIONAL = ("l2min_variational", "elliptic_variational")
_TOP_KEYS = {
    "schema_version", "name", "description", "problem", "activation", "target", "dim",
    "neurons", "seeds", "radii", "rcond", "solver", "prune", "pointset", "quadrature",
    "collocation", "error_quadrature", "paper_scale", "condition_matrix", "spectrum_n",
}


class ConfigError(ValueError):
    """Raised for any malformed or unresolvable configuration."""


@dataclass
class ExperimentConfig:
    name: str
    problem: str
    activation: str
    target: str
    neurons: list
    pointset: dict
    dim: int | None = None
    description: str = ""
    seeds: list = field(default_factory=lambda: [0])
    radii: list = field(default_factory=list)
    rcond: float | None = None
    solver: str | None = None
    prune: str | None = None
    quadrature: dict = field(default_factory=dict)
    collocation: dict = field(default_factory=dict)
    error_quadrature: dict = field(default_factory=dict)
    condition_matrix: str = "mass"
    spectrum_n: int | None = None
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        self.validate()

    @classmethod
    def from_dict(cls, raw: dict, paper_scale: bool = False) -> "ExperimentConfig":
        raw = copy.deepcopy(raw)
        unknown = set(raw) - _TOP_KEYS
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        overrides = raw.pop("paper_scale", {})
        if paper_scale:
            for key, val in overrides.items():
                if isinstance(val, dict) and isinstance(raw.get(key), dict):
                    raw[key].update(val)
                else:
                    raw[key] = val
        missing = [k for k in ("name", "problem", "activation", "target", "neurons", "pointset") if k not in raw]
        if missing:
            raise ConfigError(f"missing required keys: {missing}")
        try:
            return cls(**raw)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    def validate(self) -> None:
        if self.schema_version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {self.schema_version}")
        if self.problem not in PROBLEMS:
            raise ConfigError(f"problem must be one of {PROBLEMS}, got {self.problem!r}")
        try:
            act = Activation.parse(self.activation)
            target = parse_target(self.target)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.dim is None:
            self.dim = target.d
        if self.dim != target.d:
            raise ConfigError(f"dim={self.dim} disagrees with target dimension {target.d}")
        ns = list(self.neurons)
        if not ns or any(int(n) != n or n < 1 for n in ns):
            raise ConfigError("neurons must be a non-empty list of positive integers")
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ConfigError("neuron counts must be strictly increasing")
        if self.pointset.get("scheme") not in SCHEMES:
            raise ConfigError(f"pointset.scheme must be one of {SCHEMES}")
        if not self.seeds or any(int(s) != s or s < 0 for s in self.seeds):
            raise ConfigError("seeds must be a non-empty list of nonnegative integers")
        if any(r <= 0 for r in self.radii):
            raise ConfigError("radii must be positive")
        if self.solver is None:
            self.solver = "direct" if self.problem in _VARIATIONAL else "lstsq"
        if self.solver not in ("direct", "lstsq"):
            raise ConfigError(f"solver must be 'direct' or 'lstsq', got {self.solver!r}")
        if self.problem == "elliptic_variational" and self.solver != "direct":
            raise ConfigError("elliptic_variational solves the energy system directly")
        if self.problem not in _VARIATIONAL and self.solver != "lstsq":
            raise ConfigError("collocation problems are solved in least squares")
        if self.prune is None:
            self.prune = "inactive" if (self.problem in _VARIATIONAL and act.kind == "relu") else "none"
        if self.prune not in ("none", "inactive", "kink"):
            raise ConfigError(f"unknown prune policy {self.prune!r}")
        if self.problem == "elliptic_collocation" and act.kind == "relu" and act.power < 2:
            raise ConfigError("elliptic collocation needs ReLU^k with k >= 2 or tanh")
        if self.problem in _VARIATIONAL:
            _check_rule(self.quadrature, "quadrature")
        else:
            _check_colloc(self.collocation)
        if not self.error_quadrature:
            if not self.quadrature:
                raise ConfigError("error_quadrature is required when no quadrature is given")
            self.error_quadrature = dict(self.quadrature)
        _check_rule(self.error_quadrature, "error_quadrature")
        if self.condition_matrix not in ("mass", "energy", "design"):
            raise ConfigError("condition_matrix must be 'mass', 'energy' or 'design'")

    def to_dict(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    @property
    def randomized(self) -> bool:
        return self.pointset["scheme"] in ("random_sphere", "random_box")


def _check_rule(rule, label):
    kind = rule.get("kind")
    if kind == "gauss":
        if not (int(rule.get("cells", 0)) >= 1 and 1 <= int(rule.get("order", 0)) <= 20):
            raise ConfigError(f"{label}: gauss rules need cells >= 1 and 1 <= order <= 20")
    elif kind == "qmc":
        if int(rule.get("points", 0)) < 1:
            raise ConfigError(f"{label}: qmc rules need points >= 1")
    else:
        raise ConfigError(f"{label}.kind must be 'gauss' or 'qmc'")


def _check_colloc(col):
    kind = col.get("kind")
    if kind == "tensor":
        if int(col.get("per_axis", 0)) < 2:
            raise ConfigError("collocation.per_axis must be >= 2")
    elif kind == "qmc":
        if int(col.get("points", 0)) < 1:
            raise ConfigError("collocation.points must be >= 1")
    else:
        raise ConfigError("collocation.kind must be 'tensor' or 'qmc'")
    if col.get("bc", "none") not in ("none", "dirichlet"):
        raise ConfigError("collocation.bc must be 'none' or 'dirichlet'")
    for key in ("penalty_interior", "penalty_boundary"):
        if float(col.get(key, 1.0)) <= 0:
            raise ConfigError(f"collocation.{key} must be positive")


def _preset_dir():
    return resources.files("shallowlin.lab") / "presets"


def list_presets() -> list[str]:
    return sorted(p.name[:-5] for p in _preset_dir().iterdir() if p.name.endswith(".toml"))


def load_config(source, paper_scale: bool = False) -> ExperimentConfig:
    """Load a config from a TOML path, a preset name, or a dict."""
    if isinstance(source, dict):
        return ExperimentConfig.from_dict(source, paper_scale)
    path = Path(source)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
    else:
        name = path.name[:-5] if path.name.endswith(".toml") else path.name
        entry = _preset_dir() / f"{name}.toml"
        if not entry.is_file():
            raise ConfigError(f"no config file or preset named {str(source)!r}")
        text = entry.read_text(encoding="utf-8")
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    return ExperimentConfig.from_dict(raw, paper_scale)
