import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noonsim import (FockState, StateVector, apply_ladder, basis_state,
                     enumerate_basis, inner_product, number_matrix,
                     number_operator_expectation, state_from_kets,
                     transfer_matrix)

SQRT2 = math.sqrt(2.0)


def test_vacuum_basis():
    basis = enumerate_basis(3, 0)
    assert len(basis) == 1
    assert basis.states[0].occupations == (0, 0, 0)


def test_three_photons_three_modes():
    basis = enumerate_basis(3, 3)
    assert len(basis) == 10  # C(5, 2)
    occupations = [s.occupations for s in basis.states]
    for expected in [(3, 0, 0), (1, 1, 1), (0, 0, 3)]:
        assert expected in occupations
    assert all(sum(occ) == 3 for occ in occupations)
    assert len(set(occupations)) == 10


def test_two_modes_three_photons_ordering():
    basis = enumerate_basis(2, 3)
    assert [s.occupations for s in basis.states] == [(3, 0), (2, 1), (1, 2), (0, 3)]


def test_index_roundtrip():
    basis = enumerate_basis(3, 4)
    for k, state in enumerate(basis.states):
        assert basis.index_of(state) == k


def test_enumerate_basis_validates():
    with pytest.raises(ValueError):
        enumerate_basis(0, 2)
    with pytest.raises(ValueError):
        enumerate_basis(3, -1)
    with pytest.raises(ValueError):
        FockState((1, -1, 0))


def test_lower_single_occupation():
    basis = enumerate_basis(3, 3)
    psi = basis_state(basis, (1, 0, 2))
    out = apply_ladder(psi, 0, "lower")
    assert out.basis.total_quanta == 2
    assert out.amplitude((0, 0, 2)) == pytest.approx(1.0)
    assert out.norm() == pytest.approx(1.0)


def test_lower_doubly_occupied_mode():
    basis = enumerate_basis(3, 3)
    psi = basis_state(basis, (1, 0, 2))
    out = apply_ladder(psi, 2, "lower")
    assert out.amplitude((1, 0, 1)) == pytest.approx(SQRT2)


def test_lower_vacuum_gives_zero_vector():
    basis = enumerate_basis(3, 0)
    vac = basis_state(basis, (0, 0, 0))
    out = apply_ladder(vac, 1, "lower")
    assert out.norm() == 0.0
    assert out.basis is vac.basis


def test_raise_enters_bigger_sector():
    basis = enumerate_basis(3, 1)
    psi = basis_state(basis, (0, 1, 0))
    out = apply_ladder(psi, 1, "raise")
    assert out.basis.total_quanta == 2
    assert out.amplitude((0, 2, 0)) == pytest.approx(SQRT2)


def test_ladder_argument_errors():
    basis = enumerate_basis(3, 1)
    psi = basis_state(basis, (1, 0, 0))
    with pytest.raises(ValueError):
        apply_ladder(psi, 3, "lower")
    with pytest.raises(ValueError):
        apply_ladder(psi, 0, "sideways")


def test_number_expectation_examples():
    basis = enumerate_basis(3, 3)
    psi = basis_state(basis, (1, 0, 2))
    assert number_operator_expectation(psi, 2) == pytest.approx(2.0)
    sup = state_from_kets(basis, {(1, 0, 2): 1 / SQRT2, (1, 2, 0): 1 / SQRT2})
    assert number_operator_expectation(sup, 1) == pytest.approx(1.0)
    assert number_operator_expectation(sup, 0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        number_operator_expectation(psi, 5)


def test_inner_product_examples():
    basis = enumerate_basis(3, 3)
    psi = state_from_kets(basis, {(1, 0, 2): 1 / SQRT2, (1, 2, 0): 1 / SQRT2})
    assert inner_product(psi, psi) == pytest.approx(1.0)
    a = basis_state(basis, (1, 0, 2))
    b = basis_state(basis, (1, 2, 0))
    assert inner_product(a, b) == 0.0

    two_mode = enumerate_basis(2, 3)
    noon = state_from_kets(two_mode, {(0, 3): 1 / SQRT2, (3, 0): 1 / SQRT2})
    assert inner_product(noon, basis_state(two_mode, (0, 3))) == pytest.approx(1 / SQRT2)


def test_inner_product_basis_mismatch():
    a = basis_state(enumerate_basis(3, 2), (1, 1, 0))
    b = basis_state(enumerate_basis(3, 3), (1, 1, 1))
    with pytest.raises(ValueError):
        inner_product(a, b)


def test_inner_product_conjugate_linear_first_slot():
    basis = enumerate_basis(2, 2)
    rng = np.random.default_rng(5)
    u = StateVector(basis, rng.normal(size=3) + 1j * rng.normal(size=3))
    v = StateVector(basis, rng.normal(size=3) + 1j * rng.normal(size=3))
    scaled = StateVector(basis, 2j * u.amplitudes)
    assert inner_product(scaled, v) == pytest.approx(-2j * inner_product(u, v))
    assert inner_product(u, v) == pytest.approx(np.conj(inner_product(v, u)))


def _ladder_matrix(total, mode, direction):
    """Matrix of a or a† between adjacent sectors, built through apply_ladder."""
    source = enumerate_basis(3, total)
    columns = []
    for state in source.states:
        out = apply_ladder(basis_state(source, state.occupations), mode, direction)
        columns.append(out.amplitudes)
    return np.array(columns).T


@pytest.mark.parametrize("total", [0, 1, 2, 3, 4])
@pytest.mark.parametrize("mode", [0, 1, 2])
def test_ladder_commutator_is_identity(total, mode):
    # [a, a†] = 1 on every fixed-N sector: lower∘raise − raise∘lower = I.
    dim = len(enumerate_basis(3, total))
    lower_after_raise = _ladder_matrix(total + 1, mode, "lower") @ _ladder_matrix(total, mode, "raise")
    if total > 0:
        raise_after_lower = _ladder_matrix(total - 1, mode, "raise") @ _ladder_matrix(total, mode, "lower")
    else:
        raise_after_lower = np.zeros((dim, dim))
    assert np.max(np.abs(lower_after_raise - raise_after_lower - np.eye(dim))) < 1e-12


amplitude = st.complex_numbers(max_magnitude=5.0, allow_nan=False, allow_infinity=False)


@settings(max_examples=30, deadline=None)
@given(st.lists(amplitude, min_size=6, max_size=6),
       st.lists(amplitude, min_size=6, max_size=6),
       st.integers(min_value=0, max_value=2),
       st.sampled_from(["raise", "lower"]))
def test_apply_ladder_is_linear(a_amps, b_amps, mode, direction):
    basis = enumerate_basis(3, 2)
    a = StateVector(basis, a_amps)
    b = StateVector(basis, b_amps)
    combined = StateVector(basis, a.amplitudes + b.amplitudes)
    lhs = apply_ladder(combined, mode, direction).amplitudes
    rhs = (apply_ladder(a, mode, direction).amplitudes
           + apply_ladder(b, mode, direction).amplitudes)
    assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_transfer_matrix_matches_ladder_composition():
    basis = enumerate_basis(3, 3)
    t12 = transfer_matrix(basis, 1, 2)
    for k, state in enumerate(basis.states):
        via_ladders = apply_ladder(
            apply_ladder(basis_state(basis, state.occupations), 2, "lower"), 1, "raise")
        assert np.max(np.abs(t12[:, k] - via_ladders.amplitudes)) < 1e-12


def test_number_matrix_diag():
    basis = enumerate_basis(3, 3)
    n1 = number_matrix(basis, 1)
    assert np.allclose(np.diag(n1), [s.occupations[1] for s in basis.states])


def test_state_vector_normalization_contract():
    basis = enumerate_basis(3, 3)
    psi = state_from_kets(basis, {(1, 0, 2): 1 / SQRT2, (1, 2, 0): 1 / SQRT2})
    assert psi.is_normalized()
    assert not StateVector(basis, np.ones(10)).is_normalized()
    with pytest.raises(ValueError):
        StateVector(basis, np.zeros(3))  # wrong length
