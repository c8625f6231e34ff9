"""JSON run configuration.

Unknown keys are rejected so that a typo in a physics parameter cannot
silently fall back to a default.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .bath import BathSpec
from .errors import SpinBosonError
from .oracle import DEFAULT_MAX_DIM
from .pathsum import DEFAULT_MAX_STEPS, DEFAULT_SPLITTING, SPLITTINGS
from .spin import NAMED_GATES, NAMED_STATES, SpinSystem, check_density


class ConfigError(SpinBosonError):
    pass


DEFAULT_TOLERANCES = {
    "dephasing": 1e-10,
    "ttm": 1e-10,
    "markov_consistency": 1e-12,
    "markov_defect": 1e-8,
    "oracle": 1e-3,
}


@dataclass(frozen=True)
class GridConfig:
    dt: float
    steps: int
    splitting: str = DEFAULT_SPLITTING
    max_steps: int = DEFAULT_MAX_STEPS


@dataclass(frozen=True)
class TTMConfig:
    learn_steps: int
    cutoff: int
    total_steps: int


@dataclass(frozen=True)
class OracleConfig:
    fock_cutoff: int = 8
    max_dim: int = DEFAULT_MAX_DIM
    convergence_check: bool = False


@dataclass(frozen=True)
class RunConfig:
    bath: BathSpec
    system: SpinSystem
    grid: GridConfig
    initial_state: np.ndarray
    gates: tuple = ()
    ttm: TTMConfig | None = None
    oracle: OracleConfig = field(default_factory=OracleConfig)
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_dir: str | None = None


def _check_keys(section: str, d: Any, allowed: set[str], required: set[str] = frozenset()):
    if not isinstance(d, dict):
        raise ConfigError(f"{section}: expected an object")
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"{section}: unknown key(s) {sorted(unknown)}")
    missing = set(required) - set(d)
    if missing:
        raise ConfigError(f"{section}: missing key(s) {sorted(missing)}")


def _number(section: str, key: str, v, integer: bool = False):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{section}.{key}: expected a number, got {v!r}")
    if integer:
        if int(v) != v:
            raise ConfigError(f"{section}.{key}: expected an integer, got {v!r}")
        return int(v)
    return float(v)


def _complex(section: str, v) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, list) and len(v) == 2:
        return complex(_number(section, "re", v[0]), _number(section, "im", v[1]))
    raise ConfigError(f"{section}: complex entries are numbers or [re, im] pairs, got {v!r}")


def _parse_beta(d: dict) -> float:
    if "beta" in d and "temperature" in d:
        raise ConfigError("bath: give either beta or temperature, not both")
    if "temperature" in d:
        T = _number("bath", "temperature", d["temperature"])
        if T < 0:
            raise ConfigError("bath.temperature must be >= 0")
        return math.inf if T == 0 else 1.0 / T
    b = d.get("beta", None)
    if b is None or (isinstance(b, str) and b.lower() in ("inf", "infinity")):
        return math.inf
    b = _number("bath", "beta", b)
    if not b > 0:
        raise ConfigError("bath.beta must be > 0")
    return b


def parse_bath(d: dict) -> BathSpec:
    _check_keys("bath", d, {"family", "alpha", "s", "omega_c", "omega_max", "modes", "beta",
                            "temperature", "explicit_modes"}, {"family"})
    kw: dict[str, Any] = {"family": d["family"], "beta": _parse_beta(d)}
    for key in ("alpha", "s", "omega_c", "omega_max"):
        if key in d:
            kw[key] = _number("bath", key, d[key])
    if "modes" in d:
        kw["modes"] = _number("bath", "modes", d["modes"], integer=True)
    if "explicit_modes" in d:
        pairs = d["explicit_modes"]
        if not isinstance(pairs, list) or not all(isinstance(p, list) and len(p) == 2 for p in pairs):
            raise ConfigError("bath.explicit_modes: expected a list of [omega, g] pairs")
        kw["explicit_modes"] = tuple((_number("bath", "omega", w), _number("bath", "g", g))
                                     for w, g in pairs)
    spec = BathSpec(**kw)
    try:
        spec.validate()
    except SpinBosonError as exc:
        raise ConfigError(f"bath: {exc}") from exc
    return spec


def parse_state(v) -> np.ndarray:
    if isinstance(v, str):
        if v not in NAMED_STATES:
            raise ConfigError(f"initial_state: unknown name {v!r}; use one of {sorted(NAMED_STATES)}")
        return NAMED_STATES[v].copy()
    if not isinstance(v, list) or len(v) != 4:
        raise ConfigError("initial_state: expected a name or 4 row-major complex entries")
    rho = np.array([_complex("initial_state", x) for x in v]).reshape(2, 2)
    try:
        return check_density(rho, 1e-8)
    except SpinBosonError as exc:
        raise ConfigError(f"initial_state: {exc}") from exc


def parse_gate(i: int, g) -> tuple[int, np.ndarray]:
    _check_keys(f"gates[{i}]", g, {"step", "gate"}, {"step", "gate"})
    step = _number(f"gates[{i}]", "step", g["step"], integer=True)
    v = g["gate"]
    if isinstance(v, str):
        if v not in NAMED_GATES:
            raise ConfigError(f"gates[{i}]: unknown gate {v!r}; use one of {sorted(NAMED_GATES)}")
        return step, NAMED_GATES[v].copy()
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(r, list) and len(r) == 2 for r in v)):
        raise ConfigError(f"gates[{i}]: explicit gates are 2x2 nested lists of complex entries")
    return step, np.array([[_complex(f"gates[{i}]", x) for x in r] for r in v])


def parse_config(d: dict) -> RunConfig:
    _check_keys("config", d, {"bath", "system", "grid", "initial_state", "gates", "ttm",
                              "oracle", "tolerances", "output"}, {"bath", "system", "grid"})
    bath = parse_bath(d["bath"])

    _check_keys("system", d["system"], {"delta", "omega_s"})
    system = SpinSystem(_number("system", "delta", d["system"].get("delta", 0.0)),
                        _number("system", "omega_s", d["system"].get("omega_s", 0.0)))

    g = d["grid"]
    _check_keys("grid", g, {"dt", "steps", "splitting", "max_steps"}, {"dt", "steps"})
    grid = GridConfig(_number("grid", "dt", g["dt"]), _number("grid", "steps", g["steps"], True),
                      g.get("splitting", DEFAULT_SPLITTING),
                      _number("grid", "max_steps", g.get("max_steps", DEFAULT_MAX_STEPS), True))
    if not grid.dt > 0 or grid.steps < 1:
        raise ConfigError("grid: need dt > 0 and steps >= 1")
    if grid.splitting not in SPLITTINGS:
        raise ConfigError(f"grid.splitting must be one of {SPLITTINGS}")

    rho0 = parse_state(d.get("initial_state", "plus"))
    gates = d.get("gates", [])
    if not isinstance(gates, list):
        raise ConfigError("gates: expected a list")
    gates = tuple(parse_gate(i, x) for i, x in enumerate(gates))

    ttm = None
    if "ttm" in d:
        t = d["ttm"]
        _check_keys("ttm", t, {"learn_steps", "cutoff", "total_steps"},
                    {"learn_steps", "cutoff", "total_steps"})
        ttm = TTMConfig(*(_number("ttm", k, t[k], True) for k in ("learn_steps", "cutoff", "total_steps")))
        if ttm.learn_steps < 1 or ttm.total_steps < 1:
            raise ConfigError("ttm: learn_steps and total_steps must be >= 1")

    oracle = OracleConfig()
    if "oracle" in d:
        o = d["oracle"]
        _check_keys("oracle", o, {"fock_cutoff", "max_dim", "convergence_check"})
        oracle = OracleConfig(_number("oracle", "fock_cutoff", o.get("fock_cutoff", 8), True),
                              _number("oracle", "max_dim", o.get("max_dim", DEFAULT_MAX_DIM), True),
                              bool(o.get("convergence_check", False)))

    tol = dict(DEFAULT_TOLERANCES)
    if "tolerances" in d:
        _check_keys("tolerances", d["tolerances"], set(DEFAULT_TOLERANCES))
        tol.update({k: _number("tolerances", k, v) for k, v in d["tolerances"].items()})

    out = None
    if "output" in d:
        _check_keys("output", d["output"], {"directory"})
        out = d["output"].get("directory")

    return RunConfig(bath, system, grid, rho0, gates, ttm, oracle, tol, out)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
    return parse_config(raw)
