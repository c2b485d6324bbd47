"""Projective photon-number measurement on one mode, and NOON-state fidelity.

A conditional measurement projects the state onto the subspace with exactly
`count` photons in the measured mode, renormalizes, and re-expresses the
result over the remaining modes (which keep their original relative order).
The outcome probability is the squared norm of the projection; probabilities
over all counts of a fixed mode sum to one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .evolution import WaveguideParams, evolve
from .fock import FockBasis, FockState, StateVector, enumerate_basis

# Outcomes below this probability are indistinguishable from the ~1e-16
# amplitude dust a propagator round-trip leaves on structurally-zero kets;
# renormalizing that noise would produce a meaningless state.
ZERO_PROBABILITY_FLOOR = 1e-24


@dataclass(frozen=True)
class CollapseResult:
    """Outcome of one conditional measurement.

    collapsed_state is None exactly when the outcome has (numerically) zero
    probability — there is nothing to renormalize; scans over time grids
    treat that as an ordinary row, not an error.
    """

    outcome_probability: float
    collapsed_state: StateVector | None
    measured_mode: int
    measured_count: int

    @property
    def is_empty(self) -> bool:
        return self.collapsed_state is None


def conditional_measure(state: StateVector, mode: int, count: int) -> CollapseResult:
    """Measure `count` photons in `mode`; collapse onto the remaining modes."""
    basis = state.basis
    if basis.mode_count < 2:
        raise ValueError("conditional measurement needs at least two modes")
    if not 0 <= mode < basis.mode_count:
        raise ValueError(f"mode {mode} out of range for {basis.mode_count} modes")
    if not 0 <= count <= basis.total_quanta:
        raise ValueError(
            f"count {count} out of range for total photon number {basis.total_quanta}")
    if abs(state.norm_squared() - 1.0) > 1e-10:
        raise ValueError("conditional measurement needs a normalized state")

    reduced = enumerate_basis(basis.mode_count - 1, basis.total_quanta - count)
    projected = np.zeros(len(reduced), dtype=complex)
    probability = 0.0
    for i, s in enumerate(basis.states):
        if s.occupations[mode] != count:
            continue
        amp = state.amplitudes[i]
        probability += abs(amp) ** 2
        remaining = s.occupations[:mode] + s.occupations[mode + 1:]
        projected[reduced.index_of(FockState(remaining))] = amp

    if probability < ZERO_PROBABILITY_FLOOR:
        return CollapseResult(0.0, None, mode, count)
    collapsed = StateVector(reduced, projected / math.sqrt(probability))
    return CollapseResult(float(probability), collapsed, mode, count)


def noon_fidelity(state: StateVector, total: int) -> tuple[float, float]:
    """Overlap of a two-mode state with the N-photon NOON state.

    Returns (fixed_phase, phase_optimized):
        fixed_phase     = |⟨(|N0⟩+|0N⟩)/√2 | ψ⟩|²
        phase_optimized = max_φ |⟨(|N0⟩+e^{iφ}|0N⟩)/√2 | ψ⟩|²
                        = (|c_{N0}| + |c_{0N}|)²/2

    The phase-optimized value is the meaningful one when the generating
    dynamics leaves relative phases on the two branches.
    """
    basis = state.basis
    if basis.mode_count != 2:
        raise ValueError(f"NOON fidelity is defined for 2 modes, got {basis.mode_count}")
    if basis.total_quanta != total:
        raise ValueError(
            f"state carries {basis.total_quanta} photons, expected {total}")
    c_n0 = state.amplitude((total, 0))
    c_0n = state.amplitude((0, total))
    fixed = abs(c_n0 + c_0n) ** 2 / 2.0
    optimized = (abs(c_n0) + abs(c_0n)) ** 2 / 2.0
    return min(1.0, fixed), min(1.0, optimized)


@dataclass(frozen=True)
class CollapseSample:
    """One row of a collapse time series.

    amplitudes is None (and the fidelities NaN) on zero-probability rows.
    """

    t: float
    probability: float
    amplitudes: np.ndarray | None
    fidelity_fixed: float
    fidelity_optimized: float


@dataclass(frozen=True)
class CollapseSeries:
    """Collapsed-state coefficients along a time grid, with outcome statistics."""

    collapsed_basis: FockBasis
    measured_mode: int
    measured_count: int
    rows: tuple[CollapseSample, ...]


def collapse_series(params: WaveguideParams, initial: StateVector, mode: int,
                    count: int, t_grid: Sequence[float],
                    method: str = "analytic") -> CollapseSeries:
    """Evolve, measure and record for each time in the grid.

    NOON fidelities are filled in whenever the collapsed state has two modes;
    zero-probability rows carry NaN fidelities and no amplitudes.
    """
    ts = [float(t) for t in t_grid]
    if not ts:
        raise ValueError("t_grid must not be empty")
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise ValueError("t_grid must be strictly increasing")

    reduced = enumerate_basis(initial.basis.mode_count - 1, initial.basis.total_quanta - count)
    two_mode = reduced.mode_count == 2
    rows = []
    for t in ts:
        evolved = evolve(initial, params, t, method=method)
        result = conditional_measure(evolved, mode, count)
        if result.is_empty:
            rows.append(CollapseSample(t, 0.0, None, math.nan, math.nan))
            continue
        fixed, optimized = (noon_fidelity(result.collapsed_state, reduced.total_quanta)
                            if two_mode else (math.nan, math.nan))
        rows.append(CollapseSample(t, result.outcome_probability,
                                   result.collapsed_state.amplitudes, fixed, optimized))
    return CollapseSeries(reduced, mode, count, tuple(rows))
