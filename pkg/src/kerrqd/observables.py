"""Photon statistics, quadrature moments, reduced states and entanglement.

Functions taking a joint state also accept a :class:`~kerrqd.dynamics.Trajectory`
and then return one value per time sample.  The quadrature is
``x = (a + a^dag)/sqrt(2)`` throughout, so the vacuum variance is 1/2.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import JointState, ModelParams, Trajectory
from .states import FieldState, ParameterError, TruncationPolicy, coherent_state, squeezed_vacuum_state

SHOT_NOISE = 0.5


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    elements: np.ndarray
    subsystem: str

    def __post_init__(self):
        m = np.array(self.elements, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ParameterError("density matrix must be square")
        if self.subsystem not in ("field", "dot"):
            raise ParameterError("subsystem must be 'field' or 'dot'")
        m.flags.writeable = False
        object.__setattr__(self, "elements", m)

    @property
    def dim(self) -> int:
        return self.elements.shape[0]

    def trace(self) -> float:
        return float(np.real(np.trace(self.elements)))

    def purity(self) -> float:
        m = self.elements
        return float(np.real(np.sum(m * m.T)))

    def is_valid(self, atol=1e-10) -> bool:
        m = self.elements
        if not np.allclose(m, m.conj().T, rtol=0, atol=max(atol, 1e-12)):
            return False
        if abs(self.trace() - 1) > atol:
            return False
        return bool(np.min(np.linalg.eigvalsh(m)) >= -atol)


def _components(s):
    """(list of field amplitude arrays, ...) of a pure or joint state."""
    if isinstance(s, FieldState):
        return (np.asarray(s.amps),)
    return (np.asarray(s.ground), np.asarray(s.excited))


def mean_photon_number(s):
    n = np.arange(_components(s)[0].shape[-1])
    total = sum(np.sum(n * np.abs(c) ** 2, axis=-1) for c in _components(s))
    return float(total) if np.ndim(total) == 0 else total


def _ladder_moments(s):
    """<a>, <a^2>, <a^dag a> summed over the dot components."""
    comps = _components(s)
    dim = comps[0].shape[-1]
    sq = np.sqrt(np.arange(1, dim))
    sq2 = sq[:-1] * sq[1:]
    ea = sum(np.sum(c[..., :-1].conj() * c[..., 1:] * sq, axis=-1) for c in comps)
    ea2 = sum(np.sum(c[..., :-2].conj() * c[..., 2:] * sq2, axis=-1) for c in comps)
    return ea, ea2, mean_photon_number(s)


def quadrature_moments(s):
    """``(<x>, Var[x])`` of the field (reduced over the dot if joint).

    Uses the tridiagonal matrix elements of ``x`` directly, i.e. the
    same numbers as ``Tr(rho x)`` and ``Tr(rho x^2)`` with rho the reduced
    field state, without forming rho.
    """
    ea, ea2, nbar = _ladder_moments(s)
    mean = np.sqrt(2.0) * np.real(ea)
    second = np.real(ea2) + nbar + 0.5
    var = second - mean**2
    if np.ndim(var) == 0:
        return float(mean), float(var)
    return mean, var


def quadrature_matrix(dim: int) -> np.ndarray:
    off = np.sqrt(np.arange(1, dim) / 2.0)
    return np.diag(off, 1) + np.diag(off, -1)


def kerr_variance_analytic(alpha: complex, p: ModelParams, t):
    """Var[x](t) for a coherent input evolving in the Kerr medium alone.

    For real ``alpha`` this is the familiar closed expression in
    ``|alpha|^2``; a complex ``alpha`` enters only through an extra
    ``2 arg(alpha)`` in the two oscillating cosines.
    """
    t = np.asarray(t, dtype=float)
    mu = abs(alpha) ** 2
    phi = np.angle(alpha)
    gt = p.g * t
    w2 = 2 * p.omega * t - 2 * phi
    damp1 = np.exp(-2 * mu * (1 - np.cos(gt)))
    damp2 = np.exp(-mu * (1 - np.cos(2 * gt)))
    bracket = (
        1
        - damp1
        - np.cos(2 * mu * np.sin(gt) - w2) * damp1
        + np.cos(gt + mu * np.sin(2 * gt) - w2) * damp2
    )
    out = SHOT_NOISE + mu * bracket
    return float(out) if out.ndim == 0 else out


def reduced_density(s: JointState, which: str) -> DensityMatrix:
    gr, ex = np.asarray(s.ground), np.asarray(s.excited)
    if which == "field":
        return DensityMatrix(np.outer(gr, gr.conj()) + np.outer(ex, ex.conj()), "field")
    if which == "dot":
        return DensityMatrix(_dot_elements(gr, ex), "dot")
    raise ParameterError("which must be 'field' or 'dot'")


def _dot_elements(gr, ex):
    r11 = np.sum(np.abs(gr) ** 2, axis=-1)
    r22 = np.sum(np.abs(ex) ** 2, axis=-1)
    r12 = np.sum(gr * ex.conj(), axis=-1)
    return np.stack([np.stack([r11, r12], -1), np.stack([np.conj(r12), r22], -1)], -2)


def schmidt_parameter(rho_dot: DensityMatrix) -> float:
    """K = 1 / Tr(rho^2) of the 2x2 dot state, between 1 and 2."""
    m = rho_dot.elements
    if m.shape != (2, 2):
        raise ParameterError("Schmidt parameter is defined here for the 2x2 dot state")
    r11, r22, r12 = m[0, 0].real, m[1, 1].real, m[0, 1]
    return float(1.0 / (r11**2 + r22**2 + 2 * abs(r12) ** 2))


def schmidt_series(traj: Trajectory) -> np.ndarray:
    m = _dot_elements(traj.ground, traj.excited)
    r11, r22, r12 = m[..., 0, 0].real, m[..., 1, 1].real, m[..., 0, 1]
    return 1.0 / (r11**2 + r22**2 + 2 * np.abs(r12) ** 2)


def _pad_pair(a: np.ndarray, b: np.ndarray):
    dim = max(a.size, b.size)
    pa = np.zeros(dim, dtype=complex)
    pb = np.zeros(dim, dtype=complex)
    pa[: a.size] = a
    pb[: b.size] = b
    return pa, pb


def fidelity(s: FieldState, ref: FieldState) -> float:
    a, b = _pad_pair(np.asarray(s.amps), np.asarray(ref.amps))
    return float(min(abs(np.vdot(b, a)) ** 2, 1.0))


def overlap(rho: DensityMatrix, ref: FieldState) -> float:
    """<ref| rho |ref> with the shorter object zero-padded."""
    dim = max(rho.dim, ref.dim)
    m = np.zeros((dim, dim), dtype=complex)
    m[: rho.dim, : rho.dim] = rho.elements
    v = ref.padded(dim)
    return float(np.clip(np.real(np.vdot(v, m @ v)), 0.0, 1.0))


def rotate(state: FieldState, theta: float) -> FieldState:
    """Phase-space rotation by ``theta``: amplitude of ``|n>`` times ``exp(-i n theta)``."""
    n = np.arange(state.dim)
    return FieldState(state.amps * np.exp(-1j * n * theta), state.tail_eps)


def _superpose(terms) -> FieldState:
    dim = max(s.dim for _, s in terms)
    vec = sum(c * s.padded(dim) for c, s in terms)
    return FieldState(vec / np.linalg.norm(vec))


def cat_reference(alpha: complex, trunc: TruncationPolicy = TruncationPolicy()) -> FieldState:
    """``(e^{-i pi/4}|i alpha> + e^{i pi/4}|-i alpha>)/sqrt(2)``, renormalized.

    The branches overlap for small ``|alpha|`` so the result is normalized
    explicitly; at ``alpha = 0`` it is the vacuum up to a phase.
    """
    plus = coherent_state(1j * alpha, trunc)
    minus = coherent_state(-1j * alpha, trunc)
    return _superpose([(np.exp(-1j * np.pi / 4), plus), (np.exp(1j * np.pi / 4), minus)])


def rotated_squeezed(R: float, theta: float, convention: int = -1,
                     trunc: TruncationPolicy = TruncationPolicy()) -> FieldState:
    """Squeezed vacuum with level ``2k`` multiplied by ``exp(convention * 2ik theta)``."""
    if convention not in (-1, 1):
        raise ParameterError("convention must be -1 or +1")
    base = squeezed_vacuum_state(R, trunc)
    return rotate(base, -convention * theta)


def cross_reference(R: float, convention: int = -1, trunc: TruncationPolicy = TruncationPolicy()) -> FieldState:
    """``(e^{-i pi/4}|R>_{pi/4} + e^{i pi/4}|R>_{-pi/4})/sqrt(2)``.

    ``convention`` picks the sign of the Fock phase that defines the
    rotated squeezed state ``|R>_theta`` (see :func:`rotated_squeezed`).
    """
    a = rotated_squeezed(R, np.pi / 4, convention, trunc)
    b = rotated_squeezed(R, -np.pi / 4, convention, trunc)
    return _superpose([(np.exp(-1j * np.pi / 4), a), (np.exp(1j * np.pi / 4), b)])


def photon_distribution(s) -> np.ndarray:
    return sum(np.abs(c) ** 2 for c in _components(s))
