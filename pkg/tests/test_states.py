import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import poisson

from kerrqd.states import (
    FieldState,
    ParameterError,
    StateSpec,
    TruncationError,
    TruncationPolicy,
    auto_dim,
    coherent_state,
    custom_state,
    fock_state,
    from_spec,
    mean_photon_number,
    squeezed_vacuum_state,
)

alphas = st.complex_numbers(max_magnitude=6.0, allow_nan=False, allow_infinity=False)
squeeze = st.floats(min_value=1 / 6, max_value=6.0)


def test_vacuum_from_zero_alpha():
    s = coherent_state(0.0)
    assert s.dim == 1
    assert s.amps[0] == 1


def test_coherent_mean_photon_alpha4():
    s = coherent_state(4.0, TruncationPolicy(tail_eps=1e-12))
    assert abs(mean_photon_number(s) - 16.0) < 1e-9


def test_coherent_c2_matches_poisson_pmf():
    s = coherent_state(2.0)
    # e^{-4} 4^2 / 2!
    assert abs(s.populations[2] - math.exp(-4.0) * 8.0) < 1e-13


def test_coherent_phase_follows_alpha():
    a = 1.3 * np.exp(0.7j)
    s = coherent_state(a)
    ratio = s.amps[1:6] / s.amps[:5]
    assert np.allclose(ratio, a / np.sqrt(np.arange(1, 6)), rtol=1e-13)


def test_squeezed_R1_is_vacuum():
    s = squeezed_vacuum_state(1.0)
    assert s.dim == 1 and s.amps[0] == 1


def test_squeezed_mean_R4():
    s = squeezed_vacuum_state(4.0)
    assert abs(mean_photon_number(s) - 3.515625) < 1e-9


def test_squeezed_R6_parity_and_term_ratio():
    s = squeezed_vacuum_state(6.0)
    assert np.all(s.amps[1::2] == 0)
    r = math.log(6.0)
    # term formula: (-tanh r)^k sqrt((2k)!) / (2^k k!) at k = 1, 2
    assert abs(s.amps[2] / s.amps[0] - (-math.tanh(r)) * math.sqrt(2) / 2) < 1e-14
    assert abs(s.amps[4] / s.amps[0] - math.tanh(r) ** 2 * math.sqrt(24) / 8) < 1e-14


def test_squeezed_spec_r_and_R_agree():
    a = from_spec(StateSpec("squeezed_vacuum", r=math.log(3.0)))
    b = from_spec(StateSpec("squeezed_vacuum", R=3.0))
    assert np.allclose(a.amps, b.amps, atol=1e-15)


@pytest.mark.parametrize("R", [0.0, -1.0])
def test_nonpositive_R_rejected(R):
    with pytest.raises(ParameterError):
        squeezed_vacuum_state(R)
    with pytest.raises(ParameterError):
        StateSpec("squeezed_vacuum", R=R)


def test_fock_states():
    assert fock_state(0).amps[0] == 1
    s = fock_state(1)
    assert s.amps[1] == 1 and s.dim == 2
    with pytest.raises(ParameterError):
        fock_state(5, TruncationPolicy(dim=4))


def test_statespec_variants_exclusive():
    with pytest.raises(ParameterError):
        StateSpec("coherent", alpha=1.0, n=2)
    with pytest.raises(ParameterError):
        StateSpec("squeezed_vacuum", R=2.0, r=0.3)
    with pytest.raises(ParameterError):
        StateSpec("thermal")


def test_auto_dim_fock():
    assert auto_dim(StateSpec("fock", n=3)) == 4


def test_auto_dim_coherent_against_poisson_tail():
    D = auto_dim(StateSpec("coherent", alpha=2.0), 1e-12)
    assert poisson.sf(D - 1, 4.0) < 1e-12
    assert poisson.sf(D - 2, 4.0) >= 1e-12


def test_auto_dim_squeezed_against_term_sum():
    D = auto_dim(StateSpec("squeezed_vacuum", R=6.0), 1e-12)
    mpmath.mp.dps = 40
    r = mpmath.log(6)
    t2 = mpmath.tanh(r) ** 2

    def kept(levels):
        # probability of even levels 2k < levels, exact terms
        return sum(
            mpmath.binomial(2 * k, k) / 4**k * t2**k / mpmath.cosh(r) for k in range((levels + 1) // 2)
        )

    assert 1 - kept(D) < 1e-12
    assert 1 - kept(D - 2) >= 1e-12


def test_truncation_error_names_required_dim():
    with pytest.raises(TruncationError) as exc:
        coherent_state(10.0, TruncationPolicy(max_dim=50))
    assert exc.value.required > 50
    assert f"dim={exc.value.required}" in str(exc.value)


def test_fixed_dim_records_tail():
    s = squeezed_vacuum_state(4.0, TruncationPolicy(dim=64))
    assert s.dim == 64
    assert 1e-6 < s.tail_eps < 1e-1
    assert abs(s.norm() - 1) < 1e-14


def test_custom_state_normalized():
    s = custom_state([1, 1j, 0])
    assert abs(s.norm() - 1) < 1e-15
    with pytest.raises(ParameterError):
        custom_state([0, 0])


def test_field_state_read_only():
    s = coherent_state(1.0)
    with pytest.raises(ValueError):
        s.amps[0] = 0


@given(alphas)
def test_coherent_normalized_and_mean(a):
    tr = TruncationPolicy(tail_eps=1e-12)
    s = coherent_state(a, tr)
    assert abs(np.sum(s.populations) - 1) < 1e-12
    assert s.tail_eps <= tr.tail_eps
    assert abs(mean_photon_number(s) - abs(a) ** 2) < 10 * tr.tail_eps * s.dim + 1e-13 * max(1, abs(a) ** 2)


@given(squeeze)
def test_squeezed_normalized_parity_mean(R):
    tr = TruncationPolicy(tail_eps=1e-12)
    s = squeezed_vacuum_state(R, tr)
    assert abs(np.sum(s.populations) - 1) < 1e-12
    assert np.all(s.amps[1::2] == 0)
    assert s.tail_eps <= tr.tail_eps
    sinh2 = ((R - 1 / R) / 2) ** 2
    assert abs(mean_photon_number(s) - sinh2) < 10 * tr.tail_eps * s.dim + 1e-13 * max(1, sinh2)


@given(st.floats(0.1, 6.0), st.floats(0.1, 6.0))
def test_auto_dim_monotone_in_alpha(a, b):
    lo, hi = sorted((a, b))
    assert auto_dim(StateSpec("coherent", alpha=lo)) <= auto_dim(StateSpec("coherent", alpha=hi))


@given(st.floats(1.0, 6.0), st.floats(1.0, 6.0))
def test_auto_dim_monotone_in_R(a, b):
    lo, hi = sorted((a, b))
    spec = lambda R: StateSpec("squeezed_vacuum", R=R)  # noqa: E731
    assert auto_dim(spec(lo)) <= auto_dim(spec(hi))


@given(st.floats(-14, -2), st.floats(-14, -2))
def test_auto_dim_monotone_in_tail(e1, e2):
    loose, tight = 10 ** max(e1, e2), 10 ** min(e1, e2)
    spec = StateSpec("coherent", alpha=3.0)
    assert auto_dim(spec, loose) <= auto_dim(spec, tight)


def test_large_alpha_no_overflow():
    s = coherent_state(30.0, TruncationPolicy(max_dim=4096))
    assert np.all(np.isfinite(s.amps))
    assert abs(mean_photon_number(s) - 900) < 1e-7


def test_padded():
    s = FieldState([1.0])
    assert np.array_equal(s.padded(3), [1, 0, 0])
    with pytest.raises(ParameterError):
        coherent_state(2.0).padded(2)
