"""Locating the post-selection times that produce NOON states.

After conditioning on a photon count in one mode, the collapsed two-mode
state is a NOON state exactly when every ket other than |N0⟩ and |0N⟩ has
zero amplitude.  The scan minimizes the largest such "unwanted" amplitude
over a time grid, refines each bracketed local minimum by golden-section
search, and reports an event only if the refined minimum is below tolerance
and the phase-optimized NOON fidelity clears its floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .evolution import WaveguideParams, evolve
from .fock import StateVector, enumerate_basis
from .measurement import conditional_measure, noon_fidelity

# Outcome probabilities below this cannot be post-selected meaningfully.
_PROBABILITY_FLOOR = 1e-15

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_REFINE_WIDTH = 1e-6


@dataclass(frozen=True)
class NoonEvent:
    """One post-selection time at which a NOON state appears."""

    t: float
    suppressed_coefficient_magnitude: float
    success_probability: float
    phase_optimized_fidelity: float
    conditioning: tuple[int, int]  # (measured mode, measured count)


def _residual_fn(params: WaveguideParams, initial: StateVector,
                 conditioning: tuple[int, int], method: str):
    mode, count = conditioning
    reduced = enumerate_basis(initial.basis.mode_count - 1,
                              initial.basis.total_quanta - count)
    if reduced.mode_count != 2:
        raise ValueError(
            "NOON search needs the collapsed state to have exactly two modes; "
            f"got {reduced.mode_count}")
    unwanted = [i for i, s in enumerate(reduced.states)
                if all(n > 0 for n in s.occupations)]

    def residual(t: float) -> float:
        evolved = evolve(initial, params, t, method=method)
        result = conditional_measure(evolved, mode, count)
        if result.is_empty or result.outcome_probability < _PROBABILITY_FLOOR:
            return math.inf
        amps = result.collapsed_state.amplitudes
        return float(max(abs(amps[i]) for i in unwanted))

    return residual


def _golden_section(f, a: float, b: float, width: float) -> tuple[float, float]:
    """Minimize f on [a, b]; returns the best evaluated (t, f(t))."""
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    best = (x1, f1) if f1 <= f2 else (x2, f2)
    while b - a > width:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        candidate = (x1, f1) if f1 <= f2 else (x2, f2)
        if candidate[1] < best[1]:
            best = candidate
    return best


def find_noon_times(params: WaveguideParams, initial: StateVector,
                    conditioning: tuple[int, int], t_max: float,
                    grid_step: float = 0.1, tol: float = 1e-8,
                    method: str = "analytic") -> list[NoonEvent]:
    """Scan [0, t_max] for collapse times that yield NOON states.

    Grid minima of the unwanted-coefficient magnitude are bracketed by local
    triples and refined by golden-section search to width 1e−6.  An event
    requires both the refined minimum ≤ tol and phase-optimized fidelity
    ≥ 1 − 10·tol, so near-misses in detuned sweeps are not reported.  An
    empty result is a valid outcome.
    """
    if grid_step <= 0:
        raise ValueError(f"grid_step must be positive, got {grid_step}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if t_max <= 0:
        raise ValueError(f"t_max must be positive, got {t_max}")

    residual = _residual_fn(params, initial, conditioning, method)
    grid = np.arange(0.0, t_max + grid_step * 1e-9, grid_step)
    values = [residual(t) for t in grid]

    mode, count = conditioning
    events: list[NoonEvent] = []
    for i in range(1, len(grid) - 1):
        if not (values[i - 1] >= values[i] <= values[i + 1]):
            continue
        if not math.isfinite(values[i]):
            continue
        t_best, r_best = _golden_section(residual, grid[i - 1], grid[i + 1], _REFINE_WIDTH)
        if r_best > tol:
            continue
        evolved = evolve(initial, params, t_best, method=method)
        result = conditional_measure(evolved, mode, count)
        if result.is_empty:
            continue
        _, fidelity = noon_fidelity(result.collapsed_state,
                                    result.collapsed_state.basis.total_quanta)
        if fidelity < 1.0 - 10.0 * tol:
            continue
        events.append(NoonEvent(
            t=t_best,
            suppressed_coefficient_magnitude=r_best,
            success_probability=result.outcome_probability,
            phase_optimized_fidelity=fidelity,
            conditioning=(mode, count)))

    # Adjacent brackets can refine to the same minimum; keep the sharper one.
    events.sort(key=lambda e: e.t)
    deduped: list[NoonEvent] = []
    for event in events:
        if deduped and abs(event.t - deduped[-1].t) < grid_step:
            if event.suppressed_coefficient_magnitude \
                    < deduped[-1].suppressed_coefficient_magnitude:
                deduped[-1] = event
            continue
        deduped.append(event)
    return deduped


@dataclass(frozen=True)
class SweepRow:
    """Search outcome for one parameter set; errors are recorded, not raised."""

    params: WaveguideParams
    events: tuple[NoonEvent, ...]
    error: str | None


def sweep(params_grid: Sequence[WaveguideParams], initial: StateVector,
          conditioning: tuple[int, int], t_max: float,
          grid_step: float = 0.1, tol: float = 1e-8,
          method: str = "analytic") -> list[SweepRow]:
    """Run find_noon_times for each parameter set; rows are independent."""
    if not params_grid:
        raise ValueError("params_grid must not be empty")
    rows = []
    for params in params_grid:
        try:
            events = find_noon_times(params, initial, conditioning, t_max,
                                     grid_step=grid_step, tol=tol, method=method)
            rows.append(SweepRow(params, tuple(events), None))
        except Exception as exc:  # per-row failures must not abort the sweep
            rows.append(SweepRow(params, (), f"{type(exc).__name__}: {exc}"))
    return rows
