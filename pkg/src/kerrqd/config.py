"""Scenario configuration: parsing, validation and case expansion.

A scenario is a plain mapping (JSON or YAML on disk).  Validation errors
carry the dotted path of the offending field.
"""
from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dynamics import FRAMES, ModelParams
from .states import StateSpec, TruncationPolicy

SERIES_OBSERVABLES = (
    "excitation_probability",
    "mean_photon_number",
    "mean_x",
    "variance_x",
    "variance_normalized",
    "schmidt_parameter",
    "norm",
    "kerr_variance_analytic",
)
GRID_OBSERVABLES = ("carpet", "wigner")
OBSERVABLES = SERIES_OBSERVABLES + GRID_OBSERVABLES
TIME_UNITS = ("absolute", "rabi_periods", "kerr_periods")
FORMATS = ("csv", "json")

DEFAULTS = {
    "model": {"omega": 0.0, "omega0": None, "g": 0.0, "coupling": 1.0},
    "truncation": {"tail_eps": 1e-12, "max_dim": 4096, "dim": None},
    "time": {"start": 0.0, "stop": 1.0, "steps": 101, "unit": "absolute", "values": None, "kerr_g": None},
    "grid": {"x_min": -10.0, "x_max": 10.0, "x_points": 801, "p_min": None, "p_max": None, "p_points": None},
    "frame": "lab",
    "outputs": [],
    "verify": {"tolerance": 1e-8, "tol": 1e-12, "max_points": 16, "dim_cap": 256},
}
TOP_KEYS = {"name", "description", "model", "initial", "truncation", "time", "grid", "frame",
            "scan", "cases", "outputs", "verify", "mode"}


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


def load_file(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("", f"cannot read config {path}: {exc}") from exc
    try:
        if path.suffix in (".yaml", ".yml"):
            import yaml

            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except Exception as exc:
        raise ConfigError("", f"cannot parse {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("", "top level of a config must be a mapping")
    return data


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def _set_dotted(d: dict, key: str, value, path: str):
    parts = key.split(".")
    cur = d
    for part in parts[:-1]:
        if not isinstance(cur.get(part), dict):
            raise ConfigError(path, f"cannot override {key!r}")
        cur = cur[part]
    cur[parts[-1]] = value


def _number(value, path, kind=float):
    if isinstance(value, bool):
        raise ConfigError(path, "expected a number")
    try:
        out = kind(value)
    except (TypeError, ValueError):
        raise ConfigError(path, f"expected a number, got {value!r}") from None
    if kind is float and not np.isfinite(out):
        raise ConfigError(path, "must be finite")
    return out


def _complex(value, path):
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(_number(value[0], path), _number(value[1], path))
    if isinstance(value, dict):
        return complex(_number(value.get("re", 0.0), path + ".re"), _number(value.get("im", 0.0), path + ".im"))
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError:
            raise ConfigError(path, f"cannot read complex number {value!r}") from None
    return complex(_number(value, path))


@dataclass(frozen=True)
class Case:
    """One fully resolved simulation inside a scenario."""

    label: str
    params: ModelParams
    initial: StateSpec
    truncation: TruncationPolicy
    times: np.ndarray
    times_scaled: np.ndarray
    raw: dict


@dataclass(frozen=True)
class ScenarioConfig:
    raw: dict
    cases: tuple
    frame: str
    x: np.ndarray
    p: np.ndarray
    outputs: tuple
    verify: dict

    @property
    def name(self) -> str:
        return self.raw.get("name", "scenario")

    @property
    def time_unit(self) -> str:
        return self.raw["time"]["unit"]

    def config_hash(self) -> str:
        canon = json.dumps(self.raw, sort_keys=True, separators=(",", ":"), default=str)
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _parse_state(d, path) -> StateSpec:
    if not isinstance(d, dict) or "kind" not in d:
        raise ConfigError(path, "initial state needs a 'kind'")
    kind = d["kind"]
    unknown = set(d) - {"kind", "n", "alpha", "R", "r", "amps"}
    if unknown:
        raise ConfigError(path, f"unknown keys {sorted(unknown)}")
    try:
        if kind == "fock":
            return StateSpec("fock", n=_number(d.get("n"), path + ".n", int))
        if kind == "coherent":
            return StateSpec("coherent", alpha=_complex(d.get("alpha"), path + ".alpha"))
        if kind == "squeezed_vacuum":
            R = d.get("R")
            r = d.get("r")
            return StateSpec(
                "squeezed_vacuum",
                R=None if R is None else _number(R, path + ".R"),
                r=None if r is None else _number(r, path + ".r"),
            )
        if kind == "custom":
            amps = tuple(_complex(a, f"{path}.amps[{i}]") for i, a in enumerate(d.get("amps", [])))
            return StateSpec("custom", custom_amps=amps)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(path, str(exc)) from None
    raise ConfigError(path + ".kind", f"unknown state kind {kind!r}")


def _parse_model(d, path, allow_detuning) -> ModelParams:
    unknown = set(d) - set(DEFAULTS["model"])
    if unknown:
        raise ConfigError(path, f"unknown keys {sorted(unknown)}")
    vals = {k: _number(d[k], f"{path}.{k}") for k in ("omega", "g", "coupling")}
    omega0 = d.get("omega0")
    omega0 = None if omega0 is None else _number(omega0, path + ".omega0")
    try:
        p = ModelParams(omega0=omega0, **vals)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from None
    if not p.resonant and not allow_detuning:
        raise ConfigError(path + ".omega0", "omega0 must equal omega (only 'oracle' mode may detune)")
    return p


def _time_axis(d, path, params: ModelParams, unit_g_fallback):
    unit = d["unit"]
    if unit not in TIME_UNITS:
        raise ConfigError(path + ".unit", f"must be one of {TIME_UNITS}")
    if d.get("values") is not None:
        vals = np.array([_number(v, f"{path}.values[{i}]") for i, v in enumerate(d["values"])])
        if vals.size < 1:
            raise ConfigError(path + ".values", "needs at least one time")
    else:
        steps = _number(d["steps"], path + ".steps", int)
        start = _number(d["start"], path + ".start")
        stop = _number(d["stop"], path + ".stop")
        if steps < 1:
            raise ConfigError(path + ".steps", "must be >= 1")
        if not stop > start:
            raise ConfigError(path + ".stop", "must be greater than start")
        vals = np.linspace(start, stop, steps) if steps > 1 else np.array([start])
    if unit == "absolute":
        scale = 1.0
    elif unit == "rabi_periods":
        if params.coupling == 0:
            raise ConfigError(path + ".unit", "rabi_periods needs coupling > 0")
        scale = 2 * np.pi / params.coupling
    else:
        g = d.get("kerr_g")
        g = params.g if g is None and params.g != 0 else g
        g = unit_g_fallback if g is None else g
        if not g:
            raise ConfigError(path + ".kerr_g", "kerr_periods with g = 0 needs time.kerr_g")
        scale = 2 * np.pi / abs(_number(g, path + ".kerr_g"))
    return vals * scale, vals


def _expand_cases(raw) -> list:
    if "cases" in raw and "scan" in raw:
        raise ConfigError("scan", "give either 'scan' or 'cases', not both")
    if "scan" in raw:
        scan = raw["scan"]
        if not isinstance(scan, dict) or "param" not in scan or "values" not in scan:
            raise ConfigError("scan", "needs 'param' and 'values'")
        param = scan["param"]
        key = param if "." in param else f"model.{param}"
        short = param.split(".")[-1]
        return [{"label": f"{short}={v:g}" if isinstance(v, (int, float)) else f"{short}={v}",
                 "overrides": {key: v}} for v in scan["values"]]
    if "cases" in raw:
        cases = raw["cases"]
        if not isinstance(cases, list) or not cases:
            raise ConfigError("cases", "must be a non-empty list")
        out = []
        for i, c in enumerate(cases):
            if not isinstance(c, dict):
                raise ConfigError(f"cases[{i}]", "must be a mapping")
            out.append({"label": str(c.get("label", i)), "overrides": c.get("overrides", {})})
        return out
    return [{"label": "run", "overrides": {}}]


def parse_config(data: dict) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ConfigError("", "config must be a mapping")
    unknown = set(data) - TOP_KEYS
    if unknown:
        raise ConfigError("", f"unknown top-level keys {sorted(unknown)}")
    if "initial" not in data:
        raise ConfigError("initial", "missing")
    raw = _merge({k: v for k, v in DEFAULTS.items()}, data)
    mode = raw.get("mode", "simulate")
    if mode not in ("simulate", "oracle"):
        raise ConfigError("mode", "must be 'simulate' or 'oracle'")
    frame = raw["frame"]
    if frame not in FRAMES:
        raise ConfigError("frame", f"must be one of {FRAMES}")
    for sec in ("truncation", "time", "grid", "verify"):
        if not isinstance(raw[sec], dict):
            raise ConfigError(sec, "must be a mapping")
        extra = set(raw[sec]) - set(DEFAULTS[sec])
        if extra:
            raise ConfigError(sec, f"unknown keys {sorted(extra)}")

    case_specs = _expand_cases(raw)
    scan_gs = [c["overrides"].get("model.g") for c in case_specs]
    g_fallback = max((abs(g) for g in scan_gs if isinstance(g, (int, float)) and g), default=None)
    cases = []
    for i, spec in enumerate(case_specs):
        base = {k: copy.deepcopy(raw[k]) for k in ("model", "initial", "truncation", "time")}
        where = f"cases[{i}]" if "cases" in raw else ("scan" if "scan" in raw else "")
        for key, val in spec["overrides"].items():
            if key.split(".")[0] not in base:
                raise ConfigError(f"{where}.overrides", f"cannot override {key!r}")
            _set_dotted(base, key, val, where)
        params = _parse_model(base["model"], "model", mode == "oracle")
        initial = _parse_state(base["initial"], "initial")
        tr = base["truncation"]
        try:
            trunc = TruncationPolicy(
                tail_eps=_number(tr["tail_eps"], "truncation.tail_eps"),
                max_dim=_number(tr["max_dim"], "truncation.max_dim", int),
                dim=None if tr.get("dim") is None else _number(tr["dim"], "truncation.dim", int),
            )
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError("truncation", str(exc)) from None
        times, scaled = _time_axis(base["time"], "time", params, g_fallback)
        cases.append(Case(spec["label"], params, initial, trunc, times, scaled, base))

    grid = raw["grid"]
    x_points = _number(grid["x_points"], "grid.x_points", int)
    if x_points < 2:
        raise ConfigError("grid.x_points", "must be >= 2")
    x_min, x_max = _number(grid["x_min"], "grid.x_min"), _number(grid["x_max"], "grid.x_max")
    if not x_max > x_min:
        raise ConfigError("grid.x_max", "must exceed x_min")
    x = np.linspace(x_min, x_max, x_points)
    p_min = x_min if grid.get("p_min") is None else _number(grid["p_min"], "grid.p_min")
    p_max = x_max if grid.get("p_max") is None else _number(grid["p_max"], "grid.p_max")
    p_points = x_points if grid.get("p_points") is None else _number(grid["p_points"], "grid.p_points", int)
    if p_points < 2 or not p_max > p_min:
        raise ConfigError("grid.p_points", "p axis needs >= 2 points and p_max > p_min")
    p = np.linspace(p_min, p_max, p_points)

    outputs = []
    if not isinstance(raw["outputs"], list):
        raise ConfigError("outputs", "must be a list")
    for i, out in enumerate(raw["outputs"]):
        path = f"outputs[{i}]"
        if not isinstance(out, dict) or "observable" not in out:
            raise ConfigError(path, "needs an 'observable'")
        name = out["observable"]
        if name not in OBSERVABLES:
            raise ConfigError(path + ".observable", f"unknown observable {name!r}; known: {OBSERVABLES}")
        fmt = out.get("format", "csv")
        if fmt not in FORMATS:
            raise ConfigError(path + ".format", f"must be one of {FORMATS}")
        extra = set(out) - {"observable", "path", "format", "normalize_rows"}
        if extra:
            raise ConfigError(path, f"unknown keys {sorted(extra)}")
        if name == "kerr_variance_analytic" and any(c.initial.kind != "coherent" for c in cases):
            raise ConfigError(path + ".observable", "kerr_variance_analytic needs a coherent input")
        outputs.append({"observable": name, "path": out.get("path", f"{name}.{fmt}"), "format": fmt,
                        "normalize_rows": bool(out.get("normalize_rows", False))})
    return ScenarioConfig(raw, tuple(cases), frame, x, p, tuple(outputs), raw["verify"])
