import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noonsim import (StateVector, basis_state, collapse_series, conditional_measure,
                     enumerate_basis, evolve, noon_fidelity, noon_times,
                     reference_initial_state, state_from_kets)
from noonsim.evolution import REFERENCE_PARAMS

SQRT2 = math.sqrt(2.0)


def test_measure_definite_count_is_certain(ref_initial):
    # mode 0 holds exactly one photon in both branches of the initial state
    result = conditional_measure(ref_initial, 0, 1)
    assert result.outcome_probability == pytest.approx(1.0)
    collapsed = result.collapsed_state
    assert collapsed.basis.mode_count == 2
    assert collapsed.basis.total_quanta == 2
    assert collapsed.amplitude((0, 2)) == pytest.approx(1 / SQRT2)
    assert collapsed.amplitude((2, 0)) == pytest.approx(1 / SQRT2)


def test_measure_reference_state_at_first_noon_time(ref_initial, ref_params):
    t1, _ = noon_times()
    evolved = evolve(ref_initial, ref_params, t1)
    result = conditional_measure(evolved, 0, 0)
    assert result.outcome_probability == pytest.approx(4.0 / 9.0, abs=1e-9)
    collapsed = result.collapsed_state
    # collapsed onto (|03> + |30>)/sqrt(2) up to a global phase
    assert abs(collapsed.amplitude((0, 3))) == pytest.approx(1 / SQRT2, abs=1e-9)
    assert abs(collapsed.amplitude((3, 0))) == pytest.approx(1 / SQRT2, abs=1e-9)
    assert abs(collapsed.amplitude((1, 2))) < 1e-9
    assert abs(collapsed.amplitude((2, 1))) < 1e-9


def test_zero_probability_outcome_returns_marker(ref_initial):
    result = conditional_measure(ref_initial, 0, 0)  # no branch has n0 = 0
    assert result.outcome_probability == 0.0
    assert result.is_empty
    assert result.collapsed_state is None


def test_measure_validates_arguments(ref_initial):
    with pytest.raises(ValueError):
        conditional_measure(ref_initial, 3, 0)
    with pytest.raises(ValueError):
        conditional_measure(ref_initial, 0, 4)
    basis = ref_initial.basis
    with pytest.raises(ValueError):
        conditional_measure(StateVector(basis, np.full(10, 0.5 + 0j)), 0, 0)


def test_outcome_probabilities_sum_to_one_and_states_normalized():
    rng = np.random.default_rng(9)
    basis = enumerate_basis(3, 3)
    for _ in range(10):
        raw = rng.normal(size=10) + 1j * rng.normal(size=10)
        state = StateVector(basis, raw / np.linalg.norm(raw))
        for mode in range(3):
            results = [conditional_measure(state, mode, count) for count in range(4)]
            total = sum(r.outcome_probability for r in results)
            assert total == pytest.approx(1.0, abs=1e-12)
            for r in results:
                if r.outcome_probability > 0:
                    assert abs(r.collapsed_state.norm_squared() - 1.0) < 1e-12


def test_repeated_projection_is_identity():
    # measuring a state already definite in the mode returns probability 1
    # and the same post-measurement state (projection idempotence)
    basis = enumerate_basis(3, 3)
    state = state_from_kets(basis, {(1, 0, 2): 0.6, (1, 2, 0): 0.8})
    first = conditional_measure(state, 0, 1)
    assert first.outcome_probability == pytest.approx(1.0, abs=1e-12)
    # collapsed basis order: (2,0), (1,1), (0,2)
    assert np.max(np.abs(first.collapsed_state.amplitudes
                         - np.array([0.8, 0.0, 0.6], dtype=complex))) < 1e-12


def test_mode_symmetry_of_reference_scenario(ref_initial, ref_params):
    ts = np.linspace(0.0, 150.0, 16)
    for t in ts:
        evolved = evolve(ref_initial, ref_params, float(t))
        p1 = conditional_measure(evolved, 1, 0).outcome_probability
        p2 = conditional_measure(evolved, 2, 0).outcome_probability
        assert p1 == pytest.approx(p2, abs=1e-12)


amplitude = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)


@settings(max_examples=25, deadline=None)
@given(st.lists(amplitude, min_size=10, max_size=10), st.integers(0, 2))
def test_completeness_property(amps, mode):
    basis = enumerate_basis(3, 3)
    raw = np.array(amps, dtype=complex)
    norm = np.linalg.norm(raw)
    if norm < 1e-6:
        return
    state = StateVector(basis, raw / norm)
    probs = [conditional_measure(state, mode, count).outcome_probability
             for count in range(4)]
    assert all(p >= 0.0 for p in probs)
    assert sum(probs) == pytest.approx(1.0, abs=1e-12)


# --- NOON fidelity ---

def test_fidelity_exact_noon():
    basis = enumerate_basis(2, 3)
    noon = state_from_kets(basis, {(0, 3): 1 / SQRT2, (3, 0): 1 / SQRT2})
    assert noon_fidelity(noon, 3) == (pytest.approx(1.0), pytest.approx(1.0))


def test_fidelity_orthogonal_state():
    basis = enumerate_basis(2, 3)
    mixed = basis_state(basis, (1, 2))
    assert noon_fidelity(mixed, 3) == (0.0, 0.0)


def test_fidelity_phase_rotated_noon():
    basis = enumerate_basis(2, 3)
    rotated = state_from_kets(basis, {(0, 3): -1 / SQRT2, (3, 0): 1 / SQRT2})
    fixed, optimized = noon_fidelity(rotated, 3)
    assert fixed == pytest.approx(0.0, abs=1e-15)
    assert optimized == pytest.approx(1.0)


def test_fidelity_validates_shape():
    three_mode = basis_state(enumerate_basis(3, 3), (1, 1, 1))
    with pytest.raises(ValueError):
        noon_fidelity(three_mode, 3)
    two_photon = basis_state(enumerate_basis(2, 2), (1, 1))
    with pytest.raises(ValueError):
        noon_fidelity(two_photon, 3)


# --- collapse series ---

def test_series_row_count_and_zero_row(ref_initial, ref_params):
    grid = [0.0, 50.0, 67.551, 100.0]
    series = collapse_series(ref_params, ref_initial, 0, 0, grid)
    assert len(series.rows) == len(grid)
    first = series.rows[0]
    assert first.probability == 0.0 and first.amplitudes is None
    assert math.isnan(first.fidelity_optimized)


def test_series_minimum_near_first_noon_time(ref_initial, ref_params):
    t1, _ = noon_times()
    grid = list(np.arange(60.0, 75.0, 0.5)) + [t1]
    grid.sort()
    series = collapse_series(ref_params, ref_initial, 0, 0, grid)
    basis = series.collapsed_basis
    unwanted = basis.index_of(next(s for s in basis.states if s.occupations == (1, 2)))
    magnitudes = {row.t: abs(row.amplitudes[unwanted]) for row in series.rows}
    assert magnitudes[t1] < 1e-9
    assert min(magnitudes, key=magnitudes.get) == t1
    row_at_t1 = next(row for row in series.rows if row.t == t1)
    assert row_at_t1.fidelity_optimized == pytest.approx(1.0, abs=1e-9)


def test_series_mode1_conditioning_at_noon_time(ref_initial, ref_params):
    t1, _ = noon_times()
    series = collapse_series(ref_params, ref_initial, 1, 0, [t1])
    row = series.rows[0]
    amps = {s.occupations: row.amplitudes[i]
            for i, s in enumerate(series.collapsed_basis.states)}
    assert abs(amps[(1, 2)]) < 1e-8   # the full-state C102 branch
    assert abs(amps[(2, 1)]) < 1e-8   # the full-state C201 branch
    assert abs(abs(amps[(0, 3)]) - abs(amps[(3, 0)])) < 1e-10
    assert abs(amps[(0, 3)]) > 0.1
    assert row.fidelity_optimized == pytest.approx(1.0, abs=1e-9)


def test_series_single_time_equals_direct_measurement(ref_initial, ref_params):
    series = collapse_series(ref_params, ref_initial, 0, 1, [0.0])
    direct = conditional_measure(ref_initial, 0, 1)
    row = series.rows[0]
    assert row.probability == pytest.approx(direct.outcome_probability, abs=1e-12)
    assert np.max(np.abs(row.amplitudes - direct.collapsed_state.amplitudes)) < 1e-12


def test_series_validates_grid(ref_initial, ref_params):
    with pytest.raises(ValueError):
        collapse_series(ref_params, ref_initial, 0, 0, [])
    with pytest.raises(ValueError):
        collapse_series(ref_params, ref_initial, 0, 0, [1.0, 1.0])
