"""TOML experiment configuration with strict schema checking.

The file is flat and sectioned; every section has a complete default except
``[hurst]``, which must be explicit.  Unknown sections or keys are rejected
with messages naming the offending location.  The machine-readable schema
ships as ``config.schema.json`` at the repository root.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

try:
    import tomllib as _toml
except ModuleNotFoundError:  # Python < 3.11
    import tomli as _toml

from .errors import ConfigError, DomainError
from .experiments import SIMULATORS, ExperimentConfig
from .hurst import hurst_from_params
from .payoffs import payoff_from_params

__all__ = ["OutputConfig", "AppConfig", "load_config"]

_HURST_KEYS = {
    "family": str,
    "h": float,
    "h0": float,
    "h1": float,
    "phase": float,
    "rate": float,
    "midpoint": float,
}
_PAYOFF_KEYS = {"kind": str, "a": float, "support": list}
_SIMULATOR_KEYS = {"kind": str, "oversample": int, "truncation": float}
_EXPERIMENT_KEYS = {
    "n_grid": list,
    "replications": int,
    "master_seed": int,
    "delta_htilde": float,
    "slope_tol": float,
    "const_tol": float,
    "force_assumptions": bool,
}
_OUTPUT_KEYS = {"dir": str, "report": str, "errors": str, "path": str}

_SECTIONS = {
    "hurst": _HURST_KEYS,
    "payoff": _PAYOFF_KEYS,
    "simulator": _SIMULATOR_KEYS,
    "experiment": _EXPERIMENT_KEYS,
    "output": _OUTPUT_KEYS,
}

_DEFAULTS = {
    "payoff": {"kind": "call", "a": 0.0, "support": [-8.0, 8.0]},
    "simulator": {"kind": "cholesky", "oversample": 8, "truncation": 10.0},
    "experiment": {
        "n_grid": [64, 128, 256, 512],
        "replications": 5000,
        "master_seed": 20240801,
        "delta_htilde": 1e-3,
        "slope_tol": 0.10,
        "const_tol": 0.25,
        "force_assumptions": False,
    },
    "output": {
        "dir": ".",
        "report": "report.json",
        "errors": "errors.csv",
        "path": "path.csv",
    },
}


@dataclass(frozen=True)
class OutputConfig:
    dir: str
    report: str
    errors: str
    path: str


@dataclass(frozen=True)
class AppConfig:
    experiment: ExperimentConfig
    output: OutputConfig


def _coerce(where: str, key: str, value, want):
    if want is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: key {key!r} must be a number, got {value!r}")
        return float(value)
    if want is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: key {key!r} must be an integer, got {value!r}")
        return int(value)
    if not isinstance(value, want):
        raise ConfigError(
            f"{where}: key {key!r} must be of type {want.__name__}, got {value!r}"
        )
    return value


def _check_section(where: str, name: str, raw: dict, schema: dict) -> dict:
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: [{name}] must be a table")
    out = {}
    for key, value in raw.items():
        if key not in schema:
            raise ConfigError(
                f"{where}: [{name}] unknown key {key!r}; "
                f"allowed keys: {sorted(schema)}"
            )
        out[key] = _coerce(f"{where}: [{name}]", key, value, schema[key])
    return out


def load_config(path) -> AppConfig:
    """Parse and validate a TOML experiment configuration."""
    path = Path(path)
    where = str(path)
    try:
        with open(path, "rb") as fh:
            raw = _toml.load(fh)
    except OSError as exc:
        raise ConfigError(f"{where}: cannot read config: {exc}") from exc
    except _toml.TOMLDecodeError as exc:
        raise ConfigError(f"{where}: TOML parse error: {exc}") from exc

    for section in raw:
        if section not in _SECTIONS:
            raise ConfigError(
                f"{where}: unknown section [{section}]; "
                f"allowed sections: {sorted(_SECTIONS)}"
            )
    if "hurst" not in raw:
        raise ConfigError(f"{where}: missing required section [hurst]")

    sections = {}
    for name, schema in _SECTIONS.items():
        merged = dict(_DEFAULTS.get(name, {}))
        merged.update(_check_section(where, name, raw.get(name, {}), schema))
        sections[name] = merged

    hurst_params = dict(sections["hurst"])
    family = hurst_params.pop("family", None)
    if family is None:
        raise ConfigError(f"{where}: [hurst] requires a 'family' key")
    try:
        h = hurst_from_params(family, **hurst_params)
    except DomainError as exc:
        raise ConfigError(f"{where}: [hurst] {exc}") from exc

    pay = sections["payoff"]
    try:
        support = tuple(float(x) for x in pay["support"])
        if len(support) != 2:
            raise ValueError("support must have exactly two endpoints")
        payoff = payoff_from_params(pay["kind"], a=pay["a"], support=support)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{where}: [payoff] {exc}") from exc

    sim = sections["simulator"]
    if sim["kind"] not in SIMULATORS:
        raise ConfigError(
            f"{where}: [simulator] unknown kind {sim['kind']!r}; "
            f"allowed: {list(SIMULATORS)}"
        )

    exp = sections["experiment"]
    try:
        n_grid = tuple(int(n) for n in exp["n_grid"])
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{where}: [experiment] n_grid must be integers") from exc
    try:
        experiment = ExperimentConfig(
            hurst=h,
            payoff=payoff,
            simulator=sim["kind"],
            n_grid=n_grid,
            replications=exp["replications"],
            master_seed=exp["master_seed"],
            oversample=sim["oversample"],
            truncation=sim["truncation"],
            delta_htilde=exp["delta_htilde"],
            slope_tol=exp["slope_tol"],
            const_tol=exp["const_tol"],
            force_assumptions=exp["force_assumptions"],
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc

    out = sections["output"]
    return AppConfig(
        experiment=experiment,
        output=OutputConfig(
            dir=out["dir"], report=out["report"], errors=out["errors"], path=out["path"]
        ),
    )
