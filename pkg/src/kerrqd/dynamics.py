"""Closed-form evolution of the dot + cavity-mode system.

Under the rotating-wave coupling the joint space splits into two-level
manifolds ``{|g,n>, |e,n-1>}`` (plus the lone ``|g,0>``).  With the dot
starting in ``|g>`` each manifold is solved exactly, so any time is
evaluated directly without stepping.

Storage convention: ``excited[m]`` is the amplitude of ``|e,m>``; the last
entry is structurally zero because its partner ``|g,dim>`` lies outside the
truncated basis.  Lab-frame amplitudes carry the free phases
``exp(-i w n t)`` on ``|g,n>`` and ``exp(-i w (m+1) t)`` on ``|e,m>``; the
common zero-point phase is dropped.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import isfinite

import numpy as np

from .states import FieldState, ParameterError

FRAMES = ("lab", "rotating")


@dataclass(frozen=True)
class ModelParams:
    """Frequencies in rad per unit time (hbar = 1).

    ``omega0`` defaults to ``omega`` (resonance).  ``g`` is signed.
    """

    omega: float = 0.0
    g: float = 0.0
    coupling: float = 1.0
    omega0: float | None = None

    def __post_init__(self):
        if self.omega0 is None:
            object.__setattr__(self, "omega0", self.omega)
        for name in ("omega", "omega0", "g", "coupling"):
            if not isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if self.coupling < 0:
            raise ParameterError(f"coupling must be >= 0, got {self.coupling}")

    @property
    def resonant(self) -> bool:
        return self.omega0 == self.omega

    def require_resonance(self):
        if not self.resonant:
            raise ParameterError(
                f"closed form needs resonance omega0 == omega (got {self.omega0} vs {self.omega})"
            )

    @property
    def kerr_period(self) -> float:
        """Revival period 2 pi / |g| of the pure Kerr evolution."""
        if self.g == 0:
            raise ParameterError("Kerr period undefined for g = 0")
        return 2 * np.pi / abs(self.g)


@dataclass(frozen=True, eq=False)
class JointState:
    ground: np.ndarray
    excited: np.ndarray
    t: float = 0.0
    frame: str = "lab"

    def __post_init__(self):
        gr = np.array(self.ground, dtype=complex)
        ex = np.array(self.excited, dtype=complex)
        if gr.shape != ex.shape or gr.ndim != 1:
            raise ParameterError("ground and excited must be 1-d vectors of equal length")
        if self.frame not in FRAMES:
            raise ParameterError(f"frame must be one of {FRAMES}")
        gr.flags.writeable = False
        ex.flags.writeable = False
        object.__setattr__(self, "ground", gr)
        object.__setattr__(self, "excited", ex)

    @property
    def dim(self) -> int:
        return self.ground.size

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.ground) ** 2 + np.abs(self.excited) ** 2)))

    def as_vector(self) -> np.ndarray:
        """Interleaved basis ``[g0, e0, g1, e1, ...]`` (see :func:`basis_index`)."""
        out = np.empty(2 * self.dim, dtype=complex)
        out[0::2] = self.ground
        out[1::2] = self.excited
        return out

    @classmethod
    def from_vector(cls, vec, t=0.0, frame="lab") -> "JointState":
        vec = np.asarray(vec)
        return cls(vec[0::2], vec[1::2], t, frame)

    @classmethod
    def ground_product(cls, field: FieldState, t=0.0) -> "JointState":
        return cls(field.amps, np.zeros(field.dim, dtype=complex), t, "lab")


def basis_index(level: int, excited: bool) -> int:
    """Position of ``|g,n>`` / ``|e,n>`` in the interleaved joint vector."""
    return 2 * level + int(excited)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Joint amplitudes on a time grid, arrays shaped ``(len(t), dim)``."""

    t: np.ndarray
    ground: np.ndarray
    excited: np.ndarray
    frame: str = "lab"

    def __len__(self):
        return self.t.size

    def __getitem__(self, i) -> JointState:
        return JointState(self.ground[i], self.excited[i], float(self.t[i]), self.frame)

    def __iter__(self):
        return (self[i] for i in range(len(self)))


def quasienergies(n: int, p: ModelParams):
    """Dressed-state quasienergies of the manifold ``{|g,n>, |e,n-1>}``.

    Returns ``(gamma1, gamma2, s_n)`` with ``gamma1 > gamma2`` measured from
    the common free energy of the manifold.
    """
    p.require_resonance()
    if n < 1:
        raise ParameterError("quasienergies need n >= 1; |g,0> has no excited partner")
    s = np.sqrt(p.coupling**2 * n + p.g**2 * (n - 1) ** 2 / 4)
    mid = -p.g * (n - 1) ** 2 / 2
    return mid + s, mid - s, s


def _manifold_amplitudes(C: np.ndarray, p: ModelParams, t: np.ndarray):
    """Rotating-frame amplitudes for an array of times, shapes ``(T, dim)``."""
    dim = C.size
    t = np.asarray(t, dtype=float)[:, None]
    n = np.arange(1, dim)
    half_det = p.g * (n - 1) / 2
    rabi = p.coupling * np.sqrt(n)
    s = np.sqrt(rabi**2 + half_det**2)
    mid = -p.g * (n - 1) ** 2 / 2
    # sin(s t)/s written through sinc so s = 0 (n = 1, coupling = 0) stays finite
    sin_over_s = t * np.sinc(s * t / np.pi)
    phase = np.exp(-1j * mid * t)
    ground = np.zeros((t.shape[0], dim), dtype=complex)
    excited = np.zeros_like(ground)
    ground[:, 0] = C[0]
    ground[:, 1:] = C[1:] * phase * (np.cos(s * t) + 1j * half_det * sin_over_s)
    excited[:, :-1] = C[1:] * phase * (-1j * rabi * sin_over_s)
    return ground, excited


def _free_phases(dim: int, omega: float, t):
    t = np.asarray(t, dtype=float)[..., None]
    n = np.arange(dim)
    return np.exp(-1j * omega * n * t), np.exp(-1j * omega * (n + 1) * t)


def evolve_many(initial: FieldState, p: ModelParams, times, frame: str = "lab") -> Trajectory:
    """Joint state at every time in ``times`` (dot starts in ``|g>``)."""
    p.require_resonance()
    if frame not in FRAMES:
        raise ParameterError(f"frame must be one of {FRAMES}")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    C = np.asarray(initial.amps, dtype=complex)
    ground, excited = _manifold_amplitudes(C, p, times)
    if frame == "lab":
        fg, fe = _free_phases(C.size, p.omega, times)
        ground *= fg
        excited *= fe
    return Trajectory(times, ground, excited, frame)


def evolve(initial: FieldState, p: ModelParams, t: float, frame: str = "lab") -> JointState:
    return evolve_many(initial, p, [t], frame)[0]


def change_frame(s: JointState, p: ModelParams, frame: str) -> JointState:
    """Re-express ``s`` in the lab or rotating frame."""
    if frame not in FRAMES:
        raise ParameterError(f"frame must be one of {FRAMES}")
    if frame == s.frame:
        return s
    fg, fe = _free_phases(s.dim, p.omega, s.t)
    if frame == "rotating":
        fg, fe = fg.conj(), fe.conj()
    return JointState(s.ground * fg, s.excited * fe, s.t, frame)


def kerr_phases(dim: int, p: ModelParams, t: float, frame: str = "lab") -> np.ndarray:
    n = np.arange(dim)
    phase = p.g * n * (n - 1) * t / 2
    if frame == "lab":
        phase = phase - p.omega * n * t
    return np.exp(1j * phase)


def kerr_propagate(initial: FieldState, p: ModelParams, t: float, frame: str = "lab") -> FieldState:
    """Field evolution with the coupling switched off (Kerr medium only)."""
    if frame not in FRAMES:
        raise ParameterError(f"frame must be one of {FRAMES}")
    return FieldState(initial.amps * kerr_phases(initial.dim, p, t, frame), initial.tail_eps)


def excitation_probability(s: JointState | Trajectory):
    """Dot excitation probability; an array for a :class:`Trajectory`."""
    return np.sum(np.abs(s.excited) ** 2, axis=-1)
