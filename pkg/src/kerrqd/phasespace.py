"""Quadrature wavefunctions, quantum carpets and Wigner functions.

Fock wavefunctions ``F_n(x) = <x|n>`` come from the three-term recurrence
on normalized functions, and the Wigner kernel from the matching
recurrence on normalized associated Laguerre functions with log-gamma
prefactors.  Both hot loops live in ``_kernels`` (compiled) or
``_kernels_py`` (numpy); see :data:`BACKEND`.
"""
from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .dynamics import JointState, Trajectory
from .observables import DensityMatrix
from .states import FieldState, ParameterError

BACKEND = _backend.BACKEND
GRID_SCHEMA = "kerrqd.grid/1"

DEFAULT_X = (-10.0, 10.0, 801)


def default_axis(lo=DEFAULT_X[0], hi=DEFAULT_X[1], points=DEFAULT_X[2]) -> np.ndarray:
    if points < 2:
        raise ParameterError("a grid axis needs at least 2 points")
    return np.linspace(lo, hi, points)


@dataclass(frozen=True, eq=False)
class PhaseSpaceGrid:
    """Sampled density on a rectangular grid.

    ``kind == "carpet"``: ``values[i, j]`` at time ``t[i]`` and ``x[j]``.
    ``kind == "wigner"``: ``values[i, j]`` at momentum ``p[i]`` and ``x[j]``.
    """

    kind: str
    x: np.ndarray
    values: np.ndarray
    t: np.ndarray | None = None
    p: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        rows = self.t if self.kind == "carpet" else self.p
        if rows is None:
            raise ParameterError(f"{self.kind} grid needs its row axis")
        if self.values.shape != (len(rows), len(self.x)):
            raise ParameterError(f"values shape {self.values.shape} does not match axes")
        if len(self.x) < 2:
            raise ParameterError("x_points must be >= 2")

    @property
    def rows(self) -> np.ndarray:
        return self.t if self.kind == "carpet" else self.p

    @property
    def row_label(self) -> str:
        return "t" if self.kind == "carpet" else "p"

    def row_integrals(self) -> np.ndarray:
        return np.trapezoid(self.values, self.x, axis=1)

    def integral(self) -> float:
        """Double integral (Wigner grids)."""
        return float(np.trapezoid(np.trapezoid(self.values, self.x, axis=1), self.p))

    def normalized_rows(self) -> np.ndarray:
        peak = np.max(np.abs(self.values), axis=1, keepdims=True)
        return np.divide(self.values, peak, out=np.zeros_like(self.values), where=peak > 0)

    # --- serialization ---------------------------------------------------

    def to_csv(self, header: dict | None = None, normalize_rows: bool = False) -> str:
        """CSV text: '#' comment lines, a header row of x values, then one row per t (or p)."""
        buf = io.StringIO()
        for k, v in {"schema": GRID_SCHEMA, "kind": self.kind, **self.meta, **(header or {})}.items():
            buf.write(f"# {k}: {v}\n")
        vals = self.normalized_rows() if normalize_rows else self.values
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"{self.row_label}\\x"] + [repr(float(v)) for v in self.x])
        for r, row in zip(self.rows, vals):
            w.writerow([repr(float(r))] + [repr(float(v)) for v in row])
        return buf.getvalue()

    def to_dict(self, normalize_rows: bool = False) -> dict:
        vals = self.normalized_rows() if normalize_rows else self.values
        d = {
            "schema": GRID_SCHEMA,
            "kind": self.kind,
            "x": self.x.tolist(),
            self.row_label: self.rows.tolist(),
            "values": vals.tolist(),
            "row_normalized": bool(normalize_rows),
            "meta": self.meta,
        }
        return d

    def to_json(self, normalize_rows: bool = False, **kw) -> str:
        return json.dumps(self.to_dict(normalize_rows), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "PhaseSpaceGrid":
        if d.get("schema") != GRID_SCHEMA:
            raise ParameterError(f"unsupported grid schema {d.get('schema')!r}")
        kind = d["kind"]
        rows = np.asarray(d["t"] if kind == "carpet" else d["p"], dtype=float)
        kw = {"t": rows} if kind == "carpet" else {"p": rows}
        return cls(kind, np.asarray(d["x"], dtype=float), np.asarray(d["values"], dtype=float),
                   meta=d.get("meta", {}), **kw)

    @classmethod
    def from_csv(cls, text: str) -> "PhaseSpaceGrid":
        meta = {}
        lines = []
        for line in text.splitlines():
            if line.startswith("#"):
                k, _, v = line[1:].partition(":")
                meta[k.strip()] = v.strip()
            elif line:
                lines.append(line)
        rows = list(csv.reader(lines))
        x = np.array([float(v) for v in rows[0][1:]])
        r = np.array([float(row[0]) for row in rows[1:]])
        vals = np.array([[float(v) for v in row[1:]] for row in rows[1:]])
        kind = meta.pop("kind", "carpet")
        meta.pop("schema", None)
        kw = {"t": r} if kind == "carpet" else {"p": r}
        return cls(kind, x, vals, meta=meta, **kw)


# --- wavefunctions -----------------------------------------------------------

def fock_wavefunctions(nmax: int, x) -> np.ndarray:
    """``F[n, j] = <x_j | n>`` for ``n = 0..nmax``."""
    if nmax < 0:
        raise ParameterError("nmax must be >= 0")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return _backend.hermite_functions(int(nmax), x).reshape((nmax + 1,) + x.shape)


def fock_wavefunction(n: int, x):
    """Normalized oscillator eigenfunction ``<x|n>`` (scalar in, scalar out)."""
    out = fock_wavefunctions(n, x)[n]
    return float(out[0]) if np.ndim(x) == 0 else out


def wavefunction(state: FieldState, x) -> np.ndarray:
    F = fock_wavefunctions(state.dim - 1, x)
    return np.tensordot(np.asarray(state.amps), F, axes=1)


def carpet(traj: Trajectory | list, x=None, warn_below: float = 0.999) -> PhaseSpaceGrid:
    """Field density ``|psi(x, t)|^2`` traced over the dot, one row per time.

    Ground and excited components add incoherently.  The frame is the one
    the trajectory was produced in (lab unless asked otherwise).
    """
    if not isinstance(traj, Trajectory):
        states = list(traj)
        traj = Trajectory(
            np.array([s.t for s in states]),
            np.array([s.ground for s in states]),
            np.array([s.excited for s in states]),
            states[0].frame,
        )
    x = default_axis() if x is None else np.asarray(x, dtype=float)
    F = fock_wavefunctions(traj.ground.shape[1] - 1, x)
    values = np.abs(traj.ground @ F) ** 2 + np.abs(traj.excited @ F) ** 2
    grid = PhaseSpaceGrid("carpet", x, values, t=np.asarray(traj.t, dtype=float),
                          meta={"frame": traj.frame})
    worst = float(np.min(grid.row_integrals()))
    if worst < warn_below:
        warnings.warn(f"carpet grid too small: a row integrates to {worst:.6f}", RuntimeWarning, stacklevel=2)
    return grid


# --- Wigner ------------------------------------------------------------------

def _as_density(state) -> np.ndarray:
    if isinstance(state, DensityMatrix):
        if state.subsystem != "field":
            raise ParameterError("Wigner function needs a field density matrix")
        return np.asarray(state.elements)
    if isinstance(state, FieldState):
        a = np.asarray(state.amps)
        return np.outer(a, a.conj())
    if isinstance(state, JointState):
        g, e = np.asarray(state.ground), np.asarray(state.excited)
        return np.outer(g, g.conj()) + np.outer(e, e.conj())
    return np.asarray(state, dtype=complex)


def _trim(rho: np.ndarray, atol: float = 1e-30) -> np.ndarray:
    """Drop trailing Fock levels with no population (cost is quadratic in dim)."""
    diag = np.abs(np.diag(rho))
    nz = np.nonzero(diag > atol)[0]
    keep = int(nz[-1]) + 1 if nz.size else 1
    return rho[:keep, :keep]


def wigner_at(state, x, p, threads: int = 1) -> np.ndarray:
    """Wigner function at paired points ``(x[i], p[i])`` (any matching shapes)."""
    rho = _trim(_as_density(state))
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    if x.shape != p.shape:
        raise ParameterError("x and p must have the same shape")
    return _backend.wigner_points(rho, x.ravel(), p.ravel(), int(threads)).reshape(x.shape)


def wigner(state, x=None, p=None, threads: int = 1) -> PhaseSpaceGrid:
    """Wigner function W(x, p) of a field state on a rectangular grid.

    ``state`` may be a field :class:`DensityMatrix`, a pure
    :class:`FieldState` or a :class:`JointState` (reduced over the dot).
    Normalized so that the integral over ``dx dp`` is 1 and the vacuum
    peak is ``1/pi``.
    """
    x = default_axis() if x is None else np.asarray(x, dtype=float)
    p = x.copy() if p is None else np.asarray(p, dtype=float)
    X, P = np.meshgrid(x, p)
    W = wigner_at(state, X, P, threads)
    return PhaseSpaceGrid("wigner", x, W, p=p, meta={"backend": BACKEND})


def negativity_volume(w: PhaseSpaceGrid) -> float:
    """Integral of ``max(-W, 0)`` over the grid (trapezoid rule)."""
    if w.kind != "wigner":
        raise ParameterError("negativity volume needs a Wigner grid")
    neg = np.maximum(-w.values, 0.0)
    return float(np.trapezoid(np.trapezoid(neg, w.x, axis=1), w.p))


def x_marginal(w: PhaseSpaceGrid) -> np.ndarray:
    return np.trapezoid(w.values, w.p, axis=0)


# --- local squeezing -----------------------------------------------------------

@dataclass(frozen=True)
class Zone:
    t: float
    x_interval: tuple
    width: float


@dataclass(frozen=True, eq=False)
class ZoneReport:
    zones: list
    sigma: np.ndarray
    widths: np.ndarray
    reference_widths: np.ndarray

    @property
    def initial_width(self) -> float:
        return float(self.widths[0])

    def times(self) -> np.ndarray:
        return np.array([z.t for z in self.zones])


def peak_fwhm(x: np.ndarray, row: np.ndarray):
    """Full width at half maximum of the highest peak, with linear interpolation.

    Returns ``(width, (x_left, x_right))``; a side that never drops below
    half height is clipped at the grid edge.
    """
    i = int(np.argmax(row))
    half = row[i] / 2.0
    j = i
    while j > 0 and row[j - 1] >= half:
        j -= 1
    if j == 0:
        left = x[0]
    else:
        a, b = row[j - 1], row[j]
        left = x[j - 1] + (half - a) / (b - a) * (x[j] - x[j - 1])
    k = i
    n = len(row)
    while k < n - 1 and row[k + 1] >= half:
        k += 1
    if k == n - 1:
        right = x[-1]
    else:
        a, b = row[k], row[k + 1]
        right = x[k] + (a - half) / (a - b) * (x[k + 1] - x[k])
    return float(right - left), (float(left), float(right))


def row_sigma(c: PhaseSpaceGrid) -> np.ndarray:
    """sqrt(Var[x]) of every carpet row, from the sampled density."""
    norm = c.row_integrals()
    m1 = np.trapezoid(c.values * c.x, c.x, axis=1) / norm
    m2 = np.trapezoid(c.values * c.x**2, c.x, axis=1) / norm
    return np.sqrt(np.maximum(m2 - m1**2, 0.0))


def squeezing_zones(c: PhaseSpaceGrid, threshold: float = 0.9, reference=None) -> ZoneReport:
    """Time rows whose dominant peak is narrower than ``threshold`` times a reference width.

    Widths are full widths at half maximum of the highest local maximum.
    By default every row is compared with the first row.  ``reference`` may
    instead be a carpet on the same grid (typically the free evolution of
    the same input) or an array of per-row widths, which matters for
    states whose free width breathes in the lab frame.  The report also
    carries the ``sigma[x](t)`` trace of every row.
    """
    if c.kind != "carpet":
        raise ParameterError("squeezing zones need a carpet grid")
    widths = np.empty(len(c.t))
    intervals = []
    for i, row in enumerate(c.values):
        w, iv = peak_fwhm(c.x, row)
        widths[i] = w
        intervals.append(iv)
    if reference is None:
        ref = np.full(len(c.t), widths[0])
    elif isinstance(reference, PhaseSpaceGrid):
        if reference.values.shape != c.values.shape:
            raise ParameterError("reference carpet must share the grid")
        ref = np.array([peak_fwhm(reference.x, row)[0] for row in reference.values])
    else:
        ref = np.broadcast_to(np.asarray(reference, dtype=float), widths.shape)
    zones = [
        Zone(float(t), iv, float(w))
        for t, iv, w, r in zip(c.t, intervals, widths, ref)
        if w < threshold * r
    ]
    zones.sort(key=lambda z: z.t)
    return ZoneReport(zones, row_sigma(c), widths, np.asarray(ref, dtype=float))
