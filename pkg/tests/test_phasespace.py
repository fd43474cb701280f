import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kerrqd.dynamics import ModelParams, evolve_many, kerr_propagate
from kerrqd.observables import DensityMatrix, reduced_density
from kerrqd.dynamics import evolve
from kerrqd.phasespace import (
    PhaseSpaceGrid,
    carpet,
    fock_wavefunction,
    fock_wavefunctions,
    negativity_volume,
    peak_fwhm,
    squeezing_zones,
    wavefunction,
    wigner,
    wigner_at,
    x_marginal,
)
from kerrqd.states import FieldState, ParameterError, TruncationPolicy, coherent_state, fock_state, squeezed_vacuum_state

VAC = FieldState([1.0])
# exact negative volume of W_1 = e^{-r^2}(2 r^2 - 1)/pi over the disc r^2 < 1/2
FOCK1_NEGATIVITY = 2 / np.sqrt(np.e) - 1


def test_fock_wavefunction_anchors():
    assert fock_wavefunction(0, 0.0) == pytest.approx(np.pi ** -0.25, abs=1e-15)
    assert fock_wavefunction(1, 0.0) == 0.0


def test_fock_wavefunction_high_order_against_mpmath():
    mpmath.mp.dps = 50
    n, x = 60, mpmath.mpf(3)
    ref = mpmath.hermite(n, x) * mpmath.exp(-x * x / 2) / mpmath.sqrt(2**n * mpmath.factorial(n) * mpmath.sqrt(mpmath.pi))
    assert abs(fock_wavefunction(60, 3.0) - float(ref)) < 1e-10


def test_fock_wavefunctions_orthonormal():
    x = np.linspace(-25, 25, 5001)
    F = fock_wavefunctions(120, x)
    G = np.trapezoid(F[:, None, :] * F[None, :, :], x, axis=-1)
    assert np.max(np.abs(G - np.eye(121))) < 1e-10


@given(st.integers(0, 200), st.floats(-12, 12))
def test_oscillator_ode_residual(n, x):
    F = fock_wavefunctions(n + 2, np.array([x]))[:, 0]

    # ladder identities give exact derivatives from neighbouring functions
    def d(k):
        lower = np.sqrt(k / 2) * F[k - 1] if k > 0 else 0.0
        return lower - np.sqrt((k + 1) / 2) * F[k + 1]

    lower = np.sqrt(n / 2) * d(n - 1) if n > 0 else 0.0
    second = lower - np.sqrt((n + 1) / 2) * d(n + 1) if n + 2 < F.size else None
    if second is None:
        return
    assert abs(second - (x * x - 2 * n - 1) * F[n]) < 1e-8


def test_wavefunction_of_coherent_state():
    x = np.linspace(-6, 8, 141)
    psi = wavefunction(coherent_state(1.5, TruncationPolicy(tail_eps=1e-24)), x)
    expected = np.pi ** -0.25 * np.exp(-((x - 1.5 * np.sqrt(2)) ** 2) / 2)
    assert np.max(np.abs(np.abs(psi) - expected)) < 1e-10


def test_vacuum_carpet():
    x = np.linspace(-8, 8, 401)
    traj = evolve_many(VAC, ModelParams(omega=1.0, g=0.2), np.linspace(0, 10, 5))
    c = carpet(traj, x)
    gauss = np.exp(-x**2) / np.sqrt(np.pi)
    assert np.max(np.abs(c.values - gauss)) < 1e-14
    assert np.allclose(c.row_integrals(), 1, atol=1e-6)


def test_free_coherent_carpet_centre_oscillates():
    x = np.linspace(-10, 10, 801)
    t = np.linspace(0, 2 * np.pi, 33)
    c = carpet(evolve_many(coherent_state(2.0), ModelParams(omega=1.0, coupling=0.0), t), x)
    centre = np.trapezoid(c.values * x, x, axis=1)
    assert np.max(np.abs(centre - 2 * np.sqrt(2) * np.cos(t))) < 1e-8
    widths = np.array([peak_fwhm(x, r)[0] for r in c.values])
    assert np.ptp(widths) < 1e-3
    assert np.allclose(c.row_integrals(), 1, atol=1e-6)


def test_kerr_carpet_revives():
    p = ModelParams(omega=1.0, g=0.1, coupling=0.0)
    x = np.linspace(-8, 8, 321)
    c = carpet(evolve_many(coherent_state(2.0), p, [0.0, p.kerr_period]), x)
    assert np.max(np.abs(c.values[1] - c.values[0])) < 1e-6


def test_carpet_warns_on_small_grid():
    with pytest.warns(RuntimeWarning, match="too small"):
        carpet(evolve_many(coherent_state(3.0), ModelParams(), [0.0]), np.linspace(-1, 1, 21))


@given(st.floats(0.0, 0.3), st.floats(0, 100), st.floats(1.0, 4.0))
def test_squeezed_carpet_even_in_x(g, t, R):
    x = np.linspace(-10, 10, 201)
    traj = evolve_many(squeezed_vacuum_state(R), ModelParams(omega=1.0, g=g, coupling=0.0), [t])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        c = carpet(traj, x)
    assert np.max(np.abs(c.values - c.values[:, ::-1])) < 1e-12


def test_wigner_anchors():
    assert wigner_at(VAC, 0.0, 0.0) == pytest.approx(1 / np.pi, abs=1e-6)
    assert wigner_at(fock_state(1), 0.0, 0.0) == pytest.approx(-1 / np.pi, abs=1e-6)


def test_wigner_coherent_closed_form():
    a = 1.2 - 0.7j
    x = np.linspace(-5, 5, 41)
    X, P = np.meshgrid(x, x)
    W = wigner_at(coherent_state(a, TruncationPolicy(tail_eps=1e-24)), X, P)
    x0, p0 = np.sqrt(2) * a.real, np.sqrt(2) * a.imag
    assert np.max(np.abs(W - np.exp(-((X - x0) ** 2) - (P - p0) ** 2) / np.pi)) < 1e-10


def test_wigner_normalization_and_marginal():
    p = ModelParams(omega=1.0, g=0.1, coupling=0.0)
    s = kerr_propagate(coherent_state(2.0), p, p.kerr_period / 3, "rotating")
    x = np.linspace(-9, 9, 181)
    w = wigner(s, x, x)
    assert abs(w.integral() - 1) < 1e-4
    marg = x_marginal(w)
    dens = np.abs(wavefunction(s, x)) ** 2
    inner = slice(10, -10)
    assert np.max(np.abs(marg[inner] - dens[inner])) < 1e-5


def test_wigner_of_mixed_field_state():
    s = evolve(coherent_state(4.0), ModelParams(omega=100.0, g=0.1), 4 * np.pi)
    rho = reduced_density(s, "field")
    x = np.linspace(-8, 8, 41)
    a = wigner(rho, x)
    b = wigner(s, x)
    assert np.allclose(a.values, b.values, atol=1e-14)
    with pytest.raises(ParameterError):
        wigner(DensityMatrix([[1, 0], [0, 0]], "dot"), x)


def test_negativity_volume_anchors():
    x = np.linspace(-6, 6, 121)
    assert negativity_volume(wigner(VAC, x)) == 0.0
    coarse = negativity_volume(wigner(fock_state(1), x))
    fine_x = np.linspace(-6, 6, 481)
    fine = negativity_volume(wigner(fock_state(1), fine_x))
    assert coarse > 0
    assert abs(coarse - fine) / fine < 0.02
    assert abs(fine - FOCK1_NEGATIVITY) / FOCK1_NEGATIVITY < 0.02


def test_gaussian_squeezed_has_no_negativity():
    # negativity of a truncated Gaussian state scales with the tail, hence 1e-20
    s = squeezed_vacuum_state(4.0, TruncationPolicy(tail_eps=1e-20))
    x = np.linspace(-10, 10, 101)
    assert negativity_volume(wigner(s, x)) < 1e-8


def test_kerr_squeezed_state_goes_negative():
    p = ModelParams(omega=1.0, g=0.12, coupling=0.0)
    s = kerr_propagate(squeezed_vacuum_state(4.0), p, p.kerr_period / 8)
    x = np.linspace(-10, 10, 121)
    assert negativity_volume(wigner(s, x)) > 0.01


@given(st.floats(0.0, 10.0), st.floats(0.5, 2.5))
def test_free_wigner_rotates_rigidly(t, alpha):
    p = ModelParams(omega=1.0, coupling=0.0)
    s = kerr_propagate(coherent_state(alpha), p, t, "lab")
    x = np.linspace(-5, 5, 21)
    X, P = np.meshgrid(x, x)
    c, sn = np.cos(t), np.sin(t)
    # lab-frame free evolution turns phase space clockwise by omega t
    Wt = wigner_at(s, X, P)
    W0 = wigner_at(coherent_state(alpha), c * X - sn * P, sn * X + c * P)
    assert np.max(np.abs(Wt - W0)) < 1e-3


def test_zones_absent_without_kerr():
    p = ModelParams(omega=1.0, coupling=0.0)
    x = np.linspace(-8, 8, 321)
    c = carpet(evolve_many(coherent_state(2.0), p, np.linspace(0, 2 * np.pi * 10, 401)), x)
    rep = squeezing_zones(c, 0.9)
    assert rep.zones == []
    assert np.allclose(rep.sigma, np.sqrt(0.5), atol=1e-6)


def test_zones_near_half_period_for_coherent():
    p = ModelParams(omega=1.0, g=0.1, coupling=0.0)
    x = np.linspace(-8, 8, 641)
    tau = np.linspace(0, 1, 513)
    c = carpet(evolve_many(coherent_state(2.0), p, tau * p.kerr_period), x)
    rep = squeezing_zones(c, 0.9)
    near = [z for z in rep.zones if abs(z.t / p.kerr_period - 0.5) < 0.02]
    assert near
    assert all(z.width < 0.9 * rep.initial_width for z in near)
    assert list(rep.times()) == sorted(rep.times())


def test_zones_for_squeezed_vacuum_against_free_motion():
    p = ModelParams(omega=1.0, g=0.125, coupling=0.0)
    free = ModelParams(omega=1.0, coupling=0.0)
    x = np.linspace(-14, 14, 561)
    tau = np.linspace(0, 1, 257)
    t = tau * p.kerr_period
    s0 = squeezed_vacuum_state(4.0)
    c = carpet(evolve_many(s0, p, t), x)
    ref = carpet(evolve_many(s0, free, t), x)
    rep = squeezing_zones(c, 0.9, reference=ref)
    zt = np.array([z.t for z in rep.zones]) / p.kerr_period
    assert zt.size > 0
    assert np.all(np.abs(zt - np.round(zt)) > 1e-9)
    assert np.any(np.abs(zt - 0.5) < 0.05)


def test_grid_serialization_roundtrip():
    x = np.linspace(-6, 6, 25)
    c = carpet(evolve_many(coherent_state(0.5), ModelParams(omega=1.0), [0.0, 0.5]), x)
    back = PhaseSpaceGrid.from_csv(c.to_csv(header={"config_hash": "abc"}))
    assert np.array_equal(back.values, c.values) and np.array_equal(back.t, c.t)
    assert back.meta["config_hash"] == "abc"
    w = wigner(VAC, x)
    back = PhaseSpaceGrid.from_dict(w.to_dict())
    assert np.array_equal(back.values, w.values) and back.kind == "wigner"
    norm = c.normalized_rows()
    assert np.allclose(norm.max(axis=1), 1.0)


def test_grid_validation():
    with pytest.raises(ParameterError):
        PhaseSpaceGrid("carpet", np.array([0.0]), np.zeros((1, 1)), t=np.array([0.0]))
    with pytest.raises(ParameterError):
        PhaseSpaceGrid("wigner", np.linspace(0, 1, 3), np.zeros((2, 3)))
