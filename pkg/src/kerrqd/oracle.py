"""Brute-force reference propagator.

Builds the full rotating-wave Hamiltonian on the truncated joint basis and
integrates the Schroedinger equation with an adaptive Runge-Kutta scheme.
Nothing here uses the manifold decomposition of :mod:`kerrqd.dynamics`;
the only structural trick is splitting ``H`` into its diagonal and the
rest, and integrating in the interaction picture of the diagonal, which
removes the fast free phases without knowing anything about the model.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .dynamics import JointState, ModelParams, basis_index, evolve
from .states import FieldState, ParameterError

DEFAULT_TOL = 1e-10
ORACLE_DIM_CAP = 256
# tighter than DEFAULT_TOL so that Omega t ~ 50 stays two decades under 1e-8
REPORT_TOL = 1e-12

BASIS_ORDER = "interleaved: index 2n -> |g,n>, index 2n+1 -> |e,n>"


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class JointHamiltonian:
    matrix: np.ndarray
    dim: int
    basis_order: str = BASIS_ORDER

    def is_hermitian(self, atol=1e-12) -> bool:
        return bool(np.allclose(self.matrix, self.matrix.conj().T, rtol=0, atol=atol))


def build_hamiltonian(p: ModelParams, dim: int) -> JointHamiltonian:
    """Dense ``2 dim x 2 dim`` matrix of the dot + Kerr-mode Hamiltonian."""
    if dim < 1:
        raise ParameterError("dim must be >= 1")
    H = np.zeros((2 * dim, 2 * dim), dtype=complex)
    for n in range(dim):
        field_energy = p.omega * n - 0.5 * p.g * n * (n - 1)
        H[basis_index(n, False), basis_index(n, False)] = -0.5 * p.omega0 + field_energy
        H[basis_index(n, True), basis_index(n, True)] = 0.5 * p.omega0 + field_energy
    # a^dag sigma_- + a sigma_+ : <g,n| H |e,n-1> = coupling sqrt(n)
    for n in range(1, dim):
        i, j = basis_index(n, False), basis_index(n - 1, True)
        H[i, j] = H[j, i] = p.coupling * np.sqrt(n)
    return JointHamiltonian(H, dim)


def integrate(initial: JointState, H: JointHamiltonian, t: float, tol: float = DEFAULT_TOL,
              t0: float | None = None) -> JointState:
    """Propagate ``initial`` (lab frame) from its own time to ``t``.

    Uses DOP853 with ``rtol = atol = tol`` in the interaction picture of
    ``diag(H)``.
    """
    if not tol > 0:
        raise ParameterError("tol must be > 0")
    if initial.frame != "lab":
        raise ParameterError("the oracle works on lab-frame states")
    start = initial.t if t0 is None else t0
    psi0 = initial.as_vector()
    if t == start:
        return JointState.from_vector(psi0, t)
    M = H.matrix
    d = np.real(np.diag(M)).copy()
    V = M - np.diag(np.diag(M))
    if not np.any(V):
        psi = np.exp(-1j * d * (t - start)) * psi0
        return JointState.from_vector(psi, t)

    def rhs(tau, y):
        ph = np.exp(1j * d * tau)
        return -1j * ph * (V @ (ph.conj() * y))

    sol = solve_ivp(rhs, (0.0, t - start), psi0, method="DOP853", rtol=tol, atol=tol)
    if not sol.success:
        raise IntegrationError(f"integration to t={t} failed: {sol.message} (nfev={sol.nfev})")
    psi = np.exp(-1j * d * (t - start)) * sol.y[:, -1]
    return JointState.from_vector(psi, t)


def integrate_grid(field: FieldState, p: ModelParams, times, tol: float = DEFAULT_TOL):
    """Oracle states at each time of an increasing grid, restarting per segment."""
    H = build_hamiltonian(p, field.dim)
    state = JointState.ground_product(field, 0.0)
    out = []
    for t in np.asarray(times, dtype=float):
        state = integrate(state, H, float(t), tol)
        out.append(state)
    return out


def _observables(s: JointState):
    from .observables import mean_photon_number, quadrature_moments, reduced_density, schmidt_parameter
    from .dynamics import excitation_probability

    return {
        "P": float(excitation_probability(s)),
        "n": mean_photon_number(s),
        "var_x": quadrature_moments(s)[1],
        "K": schmidt_parameter(reduced_density(s, "dot")),
    }


@dataclass
class EquivalenceReport:
    times: list
    max_amplitude_deviation: list
    observable_deltas: dict = field(default_factory=dict)
    dim: int = 0
    tol: float = DEFAULT_TOL
    params: dict = field(default_factory=dict)

    @property
    def worst(self) -> float:
        return max(self.max_amplitude_deviation) if self.max_amplitude_deviation else 0.0

    def passed(self, threshold: float) -> bool:
        return self.worst < threshold

    def to_dict(self) -> dict:
        d = asdict(self)
        d["worst"] = self.worst
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def amplitude_deviation(a: JointState, b: JointState) -> float:
    """Max-norm distance after removing the global phase between the two states.

    The closed form drops the constant zero-point energy of the dot, so the
    two propagators legitimately differ by ``exp(i omega0 t / 2)``.
    """
    va, vb = a.as_vector(), b.as_vector()
    ov = np.vdot(vb, va)
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.max(np.abs(va - phase * vb)))


def equivalence_report(initial: FieldState, p: ModelParams, t_grid, tol: float = REPORT_TOL,
                       dim_cap: int = ORACLE_DIM_CAP, closed_form=evolve) -> EquivalenceReport:
    """Compare the closed form with the oracle at every time of ``t_grid``.

    ``closed_form`` is injectable so tests can feed a deliberately broken
    propagator.
    """
    if initial.dim > dim_cap:
        raise ParameterError(f"oracle dim cap exceeded: dim={initial.dim} > {dim_cap}")
    times = sorted(float(t) for t in t_grid)
    oracle_states = integrate_grid(initial, p, times, tol)
    devs = []
    deltas = {"P": [], "n": [], "var_x": [], "K": []}
    for t, ref in zip(times, oracle_states):
        cf = closed_form(initial, p, t)
        devs.append(amplitude_deviation(cf, ref))
        a, b = _observables(cf), _observables(ref)
        for k in deltas:
            deltas[k].append(abs(a[k] - b[k]))
    return EquivalenceReport(
        times=times,
        max_amplitude_deviation=devs,
        observable_deltas=deltas,
        dim=initial.dim,
        tol=tol,
        params=asdict(p),
    )
