"""Run configuration: validation with field paths, lossless JSON round-trip and a stable hash."""
from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping

from . import __version__
from .errors import ConfigError, SpectraError
from .geometry import GeometryModel, geometry_from_spec
from .potentials import Potential, potential_from_spec
from .symbolic import TransitionSystem

COMMANDS = ("dimension-curve", "extract", "lagrange-sample", "verify-invariants", "spectrum-table")

_EXTRACT_PARAMS = {
    "t": ("float", 3.1),
    "eta": ("float", 0.2),
    "tau": ("float?", None),
    "r0": ("int", 4),
    "k": ("int?", 6),
    "L": ("int?", None),
    "spacing": ("int?", None),
    "excellent_threshold": ("float", 0.9),
    "allow_lower_threshold": ("bool", False),
    "pool_cap": ("int", 200_000),
    "du_r_max": ("int", 16),
    "exhaustive_frame": ("bool", False),
}

# name -> (kind, default) per command
PARAM_SCHEMA: dict[str, dict[str, tuple[str, Any]]] = {
    "dimension-curve": {
        "t_grid": ("str", "2.0:3.5:0.1"),
        "r_min": ("int", 1),
        "r_max": ("int", 12),
        "stable": ("bool", False),
    },
    "extract": dict(_EXTRACT_PARAMS),
    "lagrange-sample": {
        **_EXTRACT_PARAMS,
        "count": ("int", 100),
        "m": ("int", 1),
        "depth": ("int", 6),
        "max_blocks": ("int", 8),
        "alphabet": ("words?", None),
    },
    "verify-invariants": {
        "depth": ("int", 8),
        "r_max": ("int", 8),
        "samples": ("int", 25),
        "t_values": ("floats", [2.5, 3.1, math.inf]),
    },
    "spectrum-table": {
        "max_period": ("int", 8),
        "t_max": ("float", 3.0),
    },
}

_TOP_KEYS = {"command", "system", "geometry", "potential", "params", "seed", "budget", "witness_depth", "workers"}


def _num_out(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return x


def _check(kind: str, value, path: str):
    if kind.endswith("?"):
        if value is None:
            return None
        kind = kind[:-1]
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(path, f"expected an integer, got {value!r}")
        return value
    if kind == "float":
        if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "infinity"):
            return math.inf
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(path, f"expected a number, got {value!r}")
        if math.isnan(value):
            raise ConfigError(path, "nan is not allowed")
        return float(value)
    if kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError(path, f"expected true or false, got {value!r}")
        return value
    if kind == "str":
        if not isinstance(value, str):
            raise ConfigError(path, f"expected a string, got {value!r}")
        return value
    if kind == "floats":
        if not isinstance(value, list):
            raise ConfigError(path, "expected a list of numbers")
        return [_check("float", v, f"{path}[{i}]") for i, v in enumerate(value)]
    if kind == "words":
        if not isinstance(value, list) or not value:
            raise ConfigError(path, "expected a nonempty list of words")
        out = []
        for i, w in enumerate(value):
            if not isinstance(w, list) or not w:
                raise ConfigError(f"{path}[{i}]", "expected a nonempty list of symbols")
            out.append([_check("int", a, f"{path}[{i}][{j}]") for j, a in enumerate(w)])
        return out
    raise AssertionError(kind)


def parse_grid(spec: str, path: str = "params.t_grid") -> list[float]:
    """Inclusive grid 'start:stop:step'; a single number gives one point."""
    parts = spec.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise ConfigError(path, f"cannot parse {spec!r}") from None
    if len(nums) == 1:
        return nums
    if len(nums) != 3 or nums[2] <= 0 or nums[1] < nums[0]:
        raise ConfigError(path, "expected start:stop:step with step > 0 and stop >= start")
    start, stop, step = nums
    n = int(math.floor((stop - start) / step + 1e-9))
    return [round(start + i * step, 10) for i in range(n + 1)]


@dataclass
class RunConfig:
    """Everything a command needs; `workers` never changes results and is left out of the hash."""

    command: str
    system: dict = field(default_factory=lambda: TransitionSystem.full_shift(2).to_json())
    geometry: dict = field(default_factory=lambda: {"name": "continued_fraction"})
    potential: dict = field(default_factory=lambda: {"name": "classical_cf"})
    params: dict = field(default_factory=dict)
    seed: int = 0
    budget: int = 64
    witness_depth: int = 4
    workers: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError("command", f"unknown command {self.command!r}; expected one of {', '.join(COMMANDS)}")
        for name in ("seed", "budget", "witness_depth", "workers"):
            _check("int", getattr(self, name), name)
        if self.budget < 0:
            raise ConfigError("budget", "must be nonnegative")
        if self.witness_depth < 0:
            raise ConfigError("witness_depth", "must be nonnegative")
        if self.workers < 1:
            raise ConfigError("workers", "must be at least 1")
        if not isinstance(self.params, Mapping):
            raise ConfigError("params", "expected an object")
        schema = PARAM_SCHEMA[self.command]
        unknown = sorted(set(self.params) - set(schema))
        if unknown:
            raise ConfigError(f"params.{unknown[0]}", f"not a parameter of {self.command}")
        params = {}
        for name, (kind, default) in schema.items():
            value = self.params.get(name, copy.deepcopy(default))
            params[name] = _check(kind, value, f"params.{name}")
        self.params = params
        # the model sections are checked by building them
        self.build()

    def build(self) -> tuple[TransitionSystem, GeometryModel, Potential]:
        try:
            ts = TransitionSystem.from_json(self.system)
        except SpectraError as exc:
            raise ConfigError("system", str(exc)) from None
        try:
            gm = geometry_from_spec(self.geometry)
        except (SpectraError, KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ConfigError("geometry", str(exc)) from None
        try:
            pot = potential_from_spec(self.potential, ts, gm)
        except (SpectraError, KeyError, TypeError, ValueError) as exc:
            raise ConfigError("potential", str(exc)) from None
        return ts, gm, pot

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "system": self.system,
            "geometry": self.geometry,
            "potential": self.potential,
            "params": {k: _num_out(v) if not isinstance(v, list) else [_num_out(x) for x in v] for k, v in self.params.items()},
            "seed": self.seed,
            "budget": self.budget,
            "witness_depth": self.witness_depth,
            "workers": self.workers,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "RunConfig":
        if not isinstance(data, Mapping):
            raise ConfigError("<root>", "expected an object")
        unknown = sorted(set(data) - _TOP_KEYS)
        if unknown:
            raise ConfigError(unknown[0], "unknown field")
        if "command" not in data:
            raise ConfigError("command", "missing")
        kwargs = {k: copy.deepcopy(v) for k, v in data.items()}
        return cls(**kwargs)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("<root>", f"invalid JSON: {exc}") from None
        return cls.from_json(data)

    def _digest(self, blob: dict) -> str:
        text = json.dumps(blob, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    def config_hash(self) -> str:
        """sha256 of the canonical config without `workers`, plus the artifact version."""
        blob = self.to_json()
        del blob["workers"]
        blob["version"] = __version__
        return self._digest(blob)

    def model_hash(self) -> str:
        """Hash of the parts that determine a covering table (cache namespace)."""
        blob = {
            "system": self.system,
            "geometry": self.geometry,
            "potential": self.potential,
            "witness_depth": self.witness_depth,
            "version": __version__,
        }
        return self._digest(blob)
