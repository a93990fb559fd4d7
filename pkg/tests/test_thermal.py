import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import reference_values as ref
from spinotto.spin_algebra import Spin, build_hamiltonian, diagonalize, level_energies
from spinotto.thermal import (
    boltzmann_weights,
    equilibrium,
    gibbs_state,
    partial_trace,
)

spins = st.integers(min_value=1, max_value=6).map(Spin)
couplings = st.floats(min_value=0.0, max_value=8.0)
fields = st.floats(min_value=-6.0, max_value=6.0)
temperatures = st.floats(min_value=0.05, max_value=20.0)


def test_boltzmann_weights_normalize_and_order():
    p = boltzmann_weights([0.0, 1.0, 2.0], 1.0)
    assert p.sum() == pytest.approx(1.0, abs=1e-15)
    assert p[0] > p[1] > p[2]
    np.testing.assert_allclose(p[1] / p[0], np.exp(-1.0), rtol=1e-14)


def test_boltzmann_weights_are_shift_invariant():
    # up to rounding of the shifted energies themselves
    e = np.array([3.0, 7.5, -2.0, 0.4])
    np.testing.assert_allclose(
        boltzmann_weights(e, 0.7), boltzmann_weights(e + 1234.5, 0.7), rtol=1e-11
    )


def test_boltzmann_weights_survive_huge_gaps():
    # naive exp(-E/T) would overflow/underflow; the shifted form cannot
    p = boltzmann_weights([-2000.0, 0.0, 2000.0], 1.0)
    assert p[0] == pytest.approx(1.0)
    assert p[1] == 0.0 and p[2] == 0.0


@pytest.mark.parametrize("T", [0.0, -1.0])
def test_nonpositive_temperature_is_rejected(T):
    with pytest.raises(ValueError):
        boltzmann_weights([0.0, 1.0], T)
    with pytest.raises(ValueError):
        gibbs_state(diagonalize(build_hamiltonian(1, 0.1, 4.0)), T)


def test_gibbs_probabilities_match_reference():
    # spin 1/2 partner, J = 0.1, B = 4, T = 1, in the (j, m) label order
    from spinotto.spin_algebra import match_levels

    h, state = equilibrium("1/2", 0.1, 4.0, 1.0)
    spec = diagonalize(h)
    expected = [
        ref.GIBBS_P_HALF_J01_0,
        ref.GIBBS_P_HALF_J01_1,
        ref.GIBBS_P_HALF_J01_2,
        ref.GIBBS_P_HALF_J01_3,
    ]
    for e_label, p_ref in zip(match_levels(h, spec), expected):
        k = int(np.argmin(np.abs(spec.energies - e_label)))
        assert state.probabilities[k] == pytest.approx(p_ref, rel=1e-12)


def test_log_partition_matches_direct_sum():
    s, J, B, T = Spin(2), 0.3, 2.0, 1.7
    _, state = equilibrium(s, J, B, T)
    z = np.sum(np.exp(-level_energies(s, J, B) / T))
    assert state.log_partition == pytest.approx(np.log(z), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(s=spins, J=couplings, B=fields, T=temperatures)
def test_gibbs_state_is_a_valid_density_matrix(s, J, B, T):
    _, state = equilibrium(s, J, B, T)
    rho = state.rho
    np.testing.assert_array_equal(rho, rho.T)
    assert np.trace(rho) == pytest.approx(1.0, abs=1e-12)
    purity = np.trace(rho @ rho)
    assert 1.0 / s.pair_dim - 1e-12 <= purity <= 1.0 + 1e-12
    assert np.all(state.probabilities >= 0.0)


@settings(max_examples=60, deadline=None)
@given(s=spins, J=couplings, B=fields, T=temperatures)
def test_partial_traces_are_states_and_preserve_moments(s, J, B, T):
    h, state = equilibrium(s, J, B, T)
    red_a = partial_trace(state.rho, s, "A")
    red_b = partial_trace(state.rho, s, "B")
    assert red_a.rho_loc.shape == (2, 2)
    assert red_b.rho_loc.shape == (s.dim, s.dim)
    assert np.trace(red_a.rho_loc) == pytest.approx(1.0, abs=1e-12)
    assert np.trace(red_b.rho_loc) == pytest.approx(1.0, abs=1e-12)
    # local z moments computed either way must agree
    from spinotto.spin_algebra import spin_operators

    sz_a = spin_operators(Spin(1))[0]
    sz_b = spin_operators(s)[0]
    full_a = np.trace(state.rho @ np.kron(sz_a, np.eye(s.dim)))
    full_b = np.trace(state.rho @ np.kron(np.eye(2), sz_b))
    assert np.trace(red_a.rho_loc @ sz_a) == pytest.approx(full_a, abs=1e-12)
    assert np.trace(red_b.rho_loc @ sz_b) == pytest.approx(full_b, abs=1e-12)


def test_partial_trace_recovers_product_factors():
    rho_a = np.array([[0.7, 0.1], [0.1, 0.3]])
    rho_b = np.diag([0.5, 0.3, 0.2])
    rho = np.kron(rho_a, rho_b)
    np.testing.assert_allclose(partial_trace(rho, 1, "A").rho_loc, rho_a, atol=1e-14)
    np.testing.assert_allclose(partial_trace(rho, 1, "B").rho_loc, rho_b, atol=1e-14)


def test_thermal_reduced_states_are_diagonal():
    # the pair state is block diagonal in magnetization, so both reductions
    # are diagonal in their own m basis
    for J in (0.0, 0.2, 4.0):
        _, state = equilibrium("3/2", J, 4.0, 0.8)
        for keep in ("A", "B"):
            rho_loc = partial_trace(state.rho, Spin(3), keep).rho_loc
            off = rho_loc - np.diag(np.diag(rho_loc))
            np.testing.assert_allclose(off, 0.0, atol=1e-13)


def test_partial_trace_input_validation():
    with pytest.raises(ValueError):
        partial_trace(np.eye(4) / 4.0, 1, "A")  # wrong dimension for s = 1
    with pytest.raises(ValueError):
        partial_trace(np.eye(6), 1, "A")  # trace is 6, not 1
    with pytest.raises(ValueError):
        partial_trace(np.eye(6) / 6.0, 1, "C")
