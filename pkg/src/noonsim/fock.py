"""Fock-space core: fixed-total-quanta bases, state vectors and ladder operators.

The simulator works in occupation-number bases |n₀ n₁ … n_{m−1}⟩ restricted to
a fixed total photon number N.  The Hamiltonians used downstream conserve the
total number, so each N-sector can be treated as an independent, small, dense
Hilbert space (dimension C(N+m−1, m−1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

# Squared-norm tolerance below which a state counts as physically normalized.
NORM_TOL = 1e-12


@dataclass(frozen=True)
class FockState:
    """Photon counts per mode, e.g. (1, 0, 2) for the ket |102⟩."""

    occupations: tuple[int, ...]

    def __post_init__(self):
        occ = tuple(int(n) for n in self.occupations)
        if any(n < 0 for n in occ):
            raise ValueError(f"occupations must be non-negative, got {occ}")
        object.__setattr__(self, "occupations", occ)

    def total(self) -> int:
        return sum(self.occupations)

    def label(self) -> str:
        """Digit-string ket label, '102' style (commas once any count exceeds 9)."""
        if all(n <= 9 for n in self.occupations):
            return "".join(str(n) for n in self.occupations)
        return ",".join(str(n) for n in self.occupations)

    def __str__(self) -> str:
        return f"|{self.label()}>"


def _compositions(total: int, modes: int) -> Iterator[tuple[int, ...]]:
    # Emits occupation tuples in descending lexicographic order.
    if modes == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for rest in _compositions(total - head, modes - 1):
            yield (head,) + rest


class FockBasis:
    """Ordered basis of all m-mode Fock states with total photon number N.

    The ordering is descending lexicographic on the occupation tuples
    (|300⟩, |210⟩, |201⟩, …, |003⟩ for m=3, N=3) and is fixed so downstream
    matrix layouts and CSV column orders are reproducible.
    """

    def __init__(self, mode_count: int, total_quanta: int, states: Iterable[FockState]):
        self.mode_count = int(mode_count)
        self.total_quanta = int(total_quanta)
        self.states = tuple(states)
        self._index = {s: i for i, s in enumerate(self.states)}

    @property
    def dimension(self) -> int:
        return len(self.states)

    def index_of(self, state: FockState) -> int:
        try:
            return self._index[state]
        except KeyError:
            raise ValueError(f"{state} is not a member of this basis") from None

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[FockState]:
        return iter(self.states)

    def __eq__(self, other) -> bool:
        return (isinstance(other, FockBasis)
                and self.mode_count == other.mode_count
                and self.states == other.states)

    def __hash__(self) -> int:
        return hash((self.mode_count, self.total_quanta, self.states))

    def __repr__(self) -> str:
        return (f"FockBasis(modes={self.mode_count}, total={self.total_quanta}, "
                f"dim={self.dimension})")


@lru_cache(maxsize=None)
def enumerate_basis(mode_count: int, total_quanta: int) -> FockBasis:
    """Build the fixed-N basis for the given mode count.

    Returns C(N+m−1, m−1) states in descending lexicographic order.  Cached,
    so repeated calls share a single immutable instance.
    """
    if mode_count < 1:
        raise ValueError(f"mode_count must be >= 1, got {mode_count}")
    if total_quanta < 0:
        raise ValueError(f"total_quanta must be >= 0, got {total_quanta}")
    states = [FockState(t) for t in _compositions(total_quanta, mode_count)]
    return FockBasis(mode_count, total_quanta, states)


class StateVector:
    """Complex amplitudes over a FockBasis.  Physical states have unit norm."""

    def __init__(self, basis: FockBasis, amplitudes):
        amps = np.array(amplitudes, dtype=complex)
        if amps.shape != (len(basis),):
            raise ValueError(
                f"amplitude vector has shape {amps.shape}, basis needs ({len(basis)},)")
        amps.flags.writeable = False
        self.basis = basis
        self.amplitudes = amps

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm_squared() - 1.0) <= tol

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.basis, self.amplitudes / n)

    def amplitude(self, occupations) -> complex:
        """Amplitude on one ket, addressed by its occupation tuple."""
        return complex(self.amplitudes[self.basis.index_of(FockState(tuple(occupations)))])

    def __repr__(self) -> str:
        terms = [f"({a:.4g})|{s.label()}>"
                 for s, a in zip(self.basis.states, self.amplitudes) if abs(a) > 1e-12]
        return " + ".join(terms) if terms else "0"


def basis_state(basis: FockBasis, occupations) -> StateVector:
    """Unit amplitude on a single ket of the basis."""
    amps = np.zeros(len(basis), dtype=complex)
    amps[basis.index_of(FockState(tuple(occupations)))] = 1.0
    return StateVector(basis, amps)


def state_from_kets(basis: FockBasis, ket_amplitudes: dict) -> StateVector:
    """Assemble a StateVector from {occupation tuple: amplitude} entries."""
    amps = np.zeros(len(basis), dtype=complex)
    for occ, a in ket_amplitudes.items():
        amps[basis.index_of(FockState(tuple(occ)))] = a
    return StateVector(basis, amps)


def apply_ladder(state: StateVector, mode: int, direction: str) -> StateVector:
    """Apply a_mode ('lower') or a†_mode ('raise') to a state.

    Lowering maps amplitude on |…n…⟩ to √n on |…n−1…⟩; raising maps to
    √(n+1) on |…n+1…⟩.  The result lives in the adjacent total-quanta basis
    (N−1 for lowering, N+1 for raising).  Annihilating the vacuum sector
    returns the zero vector on the vacuum basis itself, since no N=−1 basis
    exists.
    """
    basis = state.basis
    if not 0 <= mode < basis.mode_count:
        raise ValueError(f"mode {mode} out of range for {basis.mode_count} modes")
    if direction not in ("raise", "lower"):
        raise ValueError(f"direction must be 'raise' or 'lower', got {direction!r}")

    if direction == "lower" and basis.total_quanta == 0:
        return StateVector(basis, np.zeros(len(basis), dtype=complex))

    step = 1 if direction == "raise" else -1
    target = enumerate_basis(basis.mode_count, basis.total_quanta + step)
    out = np.zeros(len(target), dtype=complex)
    for i, s in enumerate(basis.states):
        a = state.amplitudes[i]
        if a == 0:
            continue
        n = s.occupations[mode]
        if direction == "lower":
            if n == 0:
                continue
            factor = math.sqrt(n)
        else:
            factor = math.sqrt(n + 1)
        occ = list(s.occupations)
        occ[mode] += step
        out[target.index_of(FockState(tuple(occ)))] += factor * a
    return StateVector(target, out)


def number_operator_expectation(state: StateVector, mode: int) -> float:
    """⟨n_mode⟩ = Σ_k n_mode(k)·|amplitude_k|², in [0, N] for normalized states."""
    basis = state.basis
    if not 0 <= mode < basis.mode_count:
        raise ValueError(f"mode {mode} out of range for {basis.mode_count} modes")
    counts = np.array([s.occupations[mode] for s in basis.states], dtype=float)
    return float(np.sum(counts * np.abs(state.amplitudes) ** 2))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """⟨a|b⟩, conjugate-linear in the first argument."""
    if a.basis != b.basis:
        raise ValueError("inner product requires both states on the same basis")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def number_matrix(basis: FockBasis, mode: int) -> np.ndarray:
    """Dense matrix of the number operator a†_mode a_mode on the fixed-N basis."""
    if not 0 <= mode < basis.mode_count:
        raise ValueError(f"mode {mode} out of range for {basis.mode_count} modes")
    return np.diag([float(s.occupations[mode]) for s in basis.states]).astype(complex)


def transfer_matrix(basis: FockBasis, create_mode: int, annihilate_mode: int) -> np.ndarray:
    """Dense matrix of a†_create a_annihilate; number-conserving, stays in the basis.

    Matrix element: |…, n_c+1, …, n_a−1, …⟩ ← |…, n_c, …, n_a, …⟩ carries
    √((n_c+1)·n_a).  With create == annihilate this is the number operator.
    """
    for m in (create_mode, annihilate_mode):
        if not 0 <= m < basis.mode_count:
            raise ValueError(f"mode {m} out of range for {basis.mode_count} modes")
    if create_mode == annihilate_mode:
        return number_matrix(basis, create_mode)
    dim = len(basis)
    out = np.zeros((dim, dim), dtype=complex)
    for j, s in enumerate(basis.states):
        n_a = s.occupations[annihilate_mode]
        if n_a == 0:
            continue
        occ = list(s.occupations)
        occ[annihilate_mode] -= 1
        occ[create_mode] += 1
        i = basis.index_of(FockState(tuple(occ)))
        out[i, j] = math.sqrt(n_a * occ[create_mode])
    return out
