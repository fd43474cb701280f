"""Execute a parsed scenario and write its outputs.

Outputs are deterministic: identical config and backend give
byte-identical files.  Nothing time- or host-dependent is written.
"""
from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import SERIES_OBSERVABLES, Case, ScenarioConfig
from .dynamics import Trajectory, evolve_many, excitation_probability
from .observables import (
    SHOT_NOISE,
    kerr_variance_analytic,
    mean_photon_number,
    quadrature_moments,
    schmidt_series,
)
from .oracle import EquivalenceReport, equivalence_report
from .phasespace import BACKEND, carpet, wigner
from .states import FieldState, from_spec

SERIES_SCHEMA = "kerrqd.series/1"
SUMMARY_SCHEMA = "kerrqd.summary/1"
VERIFY_SCHEMA = "kerrqd.verify/1"
DEFAULT_OUTPUTS = ("excitation_probability", "mean_photon_number", "variance_x", "schmidt_parameter")


@dataclass(frozen=True, eq=False)
class CaseResult:
    case: Case
    field: FieldState
    traj: Trajectory

    def diagnostics(self) -> dict:
        """Conservation checks over the whole time grid."""
        g, e = self.traj.ground, self.traj.excited
        norms = np.sum(np.abs(g) ** 2 + np.abs(e) ** 2, axis=1)
        n0 = mean_photon_number(self.field)
        excitations = mean_photon_number(self.traj) + excitation_probability(self.traj)
        pops = np.abs(np.asarray(self.field.amps)) ** 2
        manifold = np.abs(g[:, 1:]) ** 2 + np.abs(e[:, :-1]) ** 2 - pops[1:]
        return {
            "label": self.case.label,
            "dim": self.field.dim,
            "tail": float(self.field.tail_eps),
            "norm_drift": float(np.max(np.abs(norms - 1.0))),
            "conservation_residual": float(np.max(np.abs(excitations - n0))),
            "manifold_residual": float(np.max(np.abs(manifold))) if manifold.size else 0.0,
        }


def run_case(case: Case, frame: str) -> CaseResult:
    field = from_spec(case.initial, case.truncation)
    return CaseResult(case, field, evolve_many(field, case.params, case.times, frame))


def series(result: CaseResult, name: str, frame: str) -> np.ndarray:
    traj = result.traj
    if name == "excitation_probability":
        return excitation_probability(traj)
    if name == "mean_photon_number":
        return np.atleast_1d(mean_photon_number(traj))
    if name == "mean_x":
        return np.atleast_1d(quadrature_moments(traj)[0])
    if name == "variance_x":
        return np.atleast_1d(quadrature_moments(traj)[1])
    if name == "variance_normalized":
        return np.atleast_1d(quadrature_moments(traj)[1]) / SHOT_NOISE
    if name == "schmidt_parameter":
        return schmidt_series(traj)
    if name == "norm":
        return np.sum(np.abs(traj.ground) ** 2 + np.abs(traj.excited) ** 2, axis=1)
    if name == "kerr_variance_analytic":
        p = result.case.params
        if frame == "rotating":
            p = replace(p, omega=0.0, omega0=0.0)
        return np.atleast_1d(kerr_variance_analytic(result.case.initial.alpha, p, traj.t))
    raise KeyError(name)


def _slug(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9.+-]+", "_", label.replace("=", "")).strip("_") or "case"


def _with_suffix(path: str, fmt: str, *parts) -> str:
    p = Path(path)
    stem = "_".join([p.stem] + [x for x in parts if x])
    return str(p.with_name(stem + "." + fmt))


def _header_lines(meta: dict) -> str:
    return "".join(f"# {k}: {v}\n" for k, v in meta.items())


def _series_text(cfg: ScenarioConfig, results, name, fmt, meta) -> str:
    unit = cfg.time_unit
    tcol = "t" if unit == "absolute" else f"t[{unit}]"
    cols = {r.case.label: series(r, name, cfg.frame) for r in results}
    scaled = results[0].case.times_scaled
    if fmt == "json":
        doc = {
            "schema": SERIES_SCHEMA,
            "observable": name,
            "time_unit": unit,
            "t_scaled": scaled.tolist(),
            "t": {r.case.label: r.case.times.tolist() for r in results},
            "columns": {k: v.tolist() for k, v in cols.items()},
            "meta": meta,
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(_header_lines({"schema": SERIES_SCHEMA, "observable": name, **meta}))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([tcol] + list(cols))
    for i, t in enumerate(scaled):
        w.writerow([repr(float(t))] + [repr(float(v[i])) for v in cols.values()])
    return buf.getvalue()


def run_scenario(cfg: ScenarioConfig, out_dir, fmt: str | None = None, threads: int = 1,
                 only: str | None = None) -> dict:
    """Simulate every case, write the requested outputs and ``summary.json``.

    ``only`` restricts the outputs to one observable (``carpet`` or
    ``wigner``), adding a default output for it when the config has none.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = list(cfg.outputs)
    if only is not None:
        outputs = [o for o in outputs if o["observable"] == only] or [
            {"observable": only, "path": f"{only}.csv", "format": "csv", "normalize_rows": False}
        ]
    elif not outputs:
        outputs = [{"observable": n, "path": f"{n}.csv", "format": "csv", "normalize_rows": False}
                   for n in DEFAULT_OUTPUTS]

    results = [run_case(c, cfg.frame) for c in cfg.cases]
    base_meta = {
        "config_hash": cfg.config_hash(),
        "scenario": cfg.name,
        "frame": cfg.frame,
        "time_unit": cfg.time_unit,
        "kerrqd_version": __version__,
    }
    written = []
    multi = len(results) > 1
    for out in outputs:
        name = out["observable"]
        ofmt = fmt or out["format"]
        if name in SERIES_OBSERVABLES:
            path = _with_suffix(out["path"], ofmt)
            (out_dir / path).write_text(_series_text(cfg, results, name, ofmt, base_meta))
            written.append(path)
            continue
        for r in results:
            label = _slug(r.case.label) if multi else ""
            meta = {**base_meta, "case": r.case.label, "dim": r.field.dim}
            if name == "carpet":
                grids = [(carpet(r.traj, cfg.x), "")]
            else:
                grids = [
                    (wigner(s, cfg.x, cfg.p, threads=threads), f"t{i}" if len(r.traj) > 1 else "")
                    for i, s in enumerate(r.traj)
                ]
            for i, (grid, tlabel) in enumerate(grids):
                extra = dict(meta)
                if name == "wigner":
                    extra["t"] = repr(float(r.traj.t[i]))
                    extra["t_scaled"] = repr(float(r.case.times_scaled[i]))
                grid.meta.pop("backend", None)
                path = _with_suffix(out["path"], ofmt, label, tlabel)
                if ofmt == "csv":
                    text = grid.to_csv(header=extra, normalize_rows=out["normalize_rows"])
                else:
                    d = grid.to_dict(out["normalize_rows"])
                    d["meta"] = {**d["meta"], **extra}
                    text = json.dumps(d, sort_keys=True) + "\n"
                (out_dir / path).write_text(text)
                written.append(path)

    summary = {
        "schema": SUMMARY_SCHEMA,
        **base_meta,
        "backend": BACKEND,
        "cases": [r.diagnostics() for r in results],
        "outputs": written,
        "config": cfg.raw,
    }
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=1, sort_keys=True, default=str) + "\n")
    return summary


def _subsample(times: np.ndarray, k: int) -> np.ndarray:
    if times.size <= k:
        return times
    idx = np.unique(np.round(np.linspace(0, times.size - 1, k)).astype(int))
    return times[idx]


def verify_scenario(cfg: ScenarioConfig) -> list:
    """Closed form vs oracle for every case.  Returns ``(label, report, passed)`` triples."""
    v = cfg.verify
    out = []
    for case in cfg.cases:
        field = from_spec(case.initial, case.truncation)
        times = _subsample(case.times, int(v["max_points"]))
        rep: EquivalenceReport = equivalence_report(field, case.params, times, tol=float(v["tol"]),
                                                    dim_cap=int(v["dim_cap"]))
        out.append((case.label, rep, rep.passed(float(v["tolerance"]))))
    return out
