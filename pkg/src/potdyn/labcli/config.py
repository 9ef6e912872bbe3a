"""Strict JSON experiment configuration."""

from __future__ import annotations

import copy
import json
import math
from dataclasses import asdict, dataclass, field, fields

from ..compactset import Circle, Disc, Ellipse, Segment
from ..extremal import PolynomialFamily, equilibrium_quadrature, family_builtin
from ..poly import from_pairs, to_pairs

# Artifact defaults, not constants of the theory.
DEFAULT_THRESHOLDS = {
    "discrepancy": 0.05,
    "hausdorff": 0.1,
    "klimek": 0.05,
    "epsilon": 0.1,
    "probe_margin": 0.1,
}


class ConfigError(ValueError):
    pass


def _complex(v, what):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ConfigError(f"{what} must be a number or an [re, im] pair")


def _only(spec, allowed, what):
    extra = set(spec) - set(allowed)
    if extra:
        raise ConfigError(f"unknown {what} field(s): {sorted(extra)}")


def parse_set(spec: dict):
    """Build a reference set from ``{"type": ..., ...}``.

    Types: disc and circle (center, radius), segment (a, b), ellipse
    (center, a, b, filled). Complex values are numbers or [re, im] pairs.
    """
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError("set spec must be an object with a 'type'")
    kind = spec["type"]
    if kind in ("disc", "circle"):
        _only(spec, ("type", "center", "radius"), "set")
        cls = Disc if kind == "disc" else Circle
        return cls(_complex(spec.get("center", 0), "center"), float(spec.get("radius", 1.0)))
    if kind == "segment":
        _only(spec, ("type", "a", "b"), "set")
        return Segment(_complex(spec.get("a", -2), "a"), _complex(spec.get("b", 2), "b"))
    if kind == "ellipse":
        _only(spec, ("type", "center", "a", "b", "filled"), "set")
        return Ellipse(_complex(spec.get("center", 0), "center"), float(spec["a"]),
                       float(spec["b"]), bool(spec.get("filled", True)))
    raise ConfigError(f"unknown set type {kind!r}")


def _reject_constant(name):
    raise ConfigError(f"non-finite JSON constant {name} is not allowed")


def _no_duplicates(pairs):
    keys = [k for k, _ in pairs]
    if len(keys) != len(set(keys)):
        raise ConfigError("duplicate key in config")
    return dict(pairs)


@dataclass
class ExperimentConfig:
    """One experiment, parsed from a single JSON object.

    ``family`` is ``{"name", "params", "seed"}``; the name ``fixed`` takes
    ``params.coeffs`` ([re, im] pairs) and repeats that polynomial for every
    n, as a control. ``set`` overrides the family's reference set.
    """

    experiment: str = ""
    family: dict = field(default_factory=lambda: {"name": "power_plus_c", "params": {"c": 0.5}})
    set: dict | None = None
    n_list: list = field(default_factory=lambda: [4, 8, 16, 32])
    resolution: int = 512
    max_iter: int = 200
    dem_factor: float | None = None
    green_max_iter: int = 1000
    depth: int | None = None
    min_points: int = 4096
    samples: int = 100_000
    mode: str = "auto"
    moments: int = 8
    seed: int = 0
    probes: list | None = None
    T: int | None = None
    tol: float | None = None
    render: list = field(default_factory=lambda: ["julia"])
    polynomial: list | None = None
    out: str | None = None
    thresholds: dict = field(default_factory=lambda: dict(DEFAULT_THRESHOLDS))

    def __post_init__(self):
        _only(self.family, ("name", "params", "seed"), "family")
        if "name" not in self.family:
            raise ConfigError("family needs a name")
        _only(self.thresholds, DEFAULT_THRESHOLDS, "threshold")
        self.thresholds = {**DEFAULT_THRESHOLDS, **self.thresholds}
        self.n_list = [int(n) for n in self.n_list]
        if not self.n_list or any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise ConfigError("n_list must be nonempty and strictly increasing")
        if self.seed < 0 or self.seed >= 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.mode not in ("auto", "full-tree", "random-path"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if set(self.render) - {"julia", "green"}:
            raise ConfigError("render entries must be 'julia' or 'green'")

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        _only(data, [f.name for f in fields(cls)], "config")
        return cls(**copy.deepcopy(data))

    @classmethod
    def from_json(cls, text: str) -> ExperimentConfig:
        data = json.loads(text, object_pairs_hook=_no_duplicates, parse_constant=_reject_constant)
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def with_overrides(self, **kw) -> ExperimentConfig:
        data = self.to_dict()
        data.update({k: v for k, v in kw.items() if v is not None})
        return ExperimentConfig.from_dict(data)

    # -------------------------------------------------------------- builders

    def family_params(self) -> dict:
        params = dict(self.family.get("params", {}))
        if "seed" in self.family:
            params.setdefault("seed", int(self.family["seed"]))
        elif self.family["name"] == "bounded_coeffs":
            params.setdefault("seed", self.seed)
        if self.set is not None:
            params["set"] = parse_set(self.set)
        return params

    def build_family(self) -> PolynomialFamily:
        name = self.family["name"]
        params = self.family_params()
        if name == "fixed":
            if "coeffs" not in params:
                raise ConfigError("family 'fixed' needs params.coeffs")
            p = from_pairs(params["coeffs"])
            E = params.get("set", Circle(0j, 1.0))
            E = parse_set(E) if isinstance(E, dict) else E
            return PolynomialFamily("fixed", {"coeffs": to_pairs(p)}, lambda n: p, E,
                                    equilibrium_quadrature(E))
        return family_builtin(name, params)

    def probe_points(self) -> list:
        if self.probes is None:
            return [3 + 0j, 2.5j, -2.5 + 1j, 2 + 2j]
        return [_complex(v, "probe") for v in self.probes]


def finite_or_none(x):
    """JSON-safe float: NaN and infinities become null."""
    return x if isinstance(x, float) and math.isfinite(x) else (None if isinstance(x, float) else x)
