"""Three-waveguide Hamiltonian, collective-mode reduction and the basis change.

Mode 0 is the central waveguide; modes 1 and 2 share a frequency ω and couple
to mode 0 with rate g and to each other with rate λ:

    H = ω₀ a₀†a₀ + ω (a₁†a₁ + a₂†a₂) + λ (a₁†a₂ + a₂†a₁)
        + g [a₀ (a₁† + a₂†) + a₀† (a₁ + a₂)]

Introducing the symmetric/antisymmetric collective modes A = (a₁+a₂)/√2 and
B = (a₁−a₂)/√2 decouples B and leaves an effective two-field interaction:

    H = ω₀ a₀†a₀ + (ω+λ) A†A + (ω−λ) B†B + √2 g (A a₀† + A† a₀)

`mode_transform` builds the unitary change of Fock basis between the original
(a₀, a₁, a₂) occupation kets and the (a₀, A, B) occupation kets, so both forms
can be compared matrix-to-matrix on every fixed-N sector.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .fock import FockBasis, FockState, number_matrix, transfer_matrix

SQRT2 = math.sqrt(2.0)

# Absolute Hermiticity defect allowed in a HermitianMatrix (for O(1) entries).
HERMITICITY_TOL = 1e-13

# The rotating-wave form of the couplings assumes hopping rates much smaller
# than the mode frequencies; warn past this ratio.
RWA_RATIO = 0.1


@dataclass(frozen=True)
class WaveguideParams:
    """Physical parameters of the array (units with ħ = 1).

    omega0: frequency of mode 0; omega: shared frequency of modes 1 and 2;
    lam: hopping rate between modes 1 and 2 (λ; renamed because `lambda` is
    reserved in Python); g: hopping rate between mode 0 and each of modes 1, 2.
    """

    omega0: float
    omega: float
    lam: float
    g: float

    def __post_init__(self):
        for name in ("omega0", "omega", "lam", "g"):
            object.__setattr__(self, name, float(getattr(self, name)))
        scale = min(abs(self.omega0), abs(self.omega))
        if max(abs(self.lam), abs(self.g)) > RWA_RATIO * scale:
            warnings.warn(
                "hopping rates are not small compared to the mode frequencies; "
                "the rotating-wave form of the couplings may be a poor model "
                f"(lam={self.lam}, g={self.g}, min frequency={scale})",
                stacklevel=2)

    # Derived rates, recomputed on access so they can never go stale.
    @property
    def omega1(self) -> float:
        """Ω₁ = (ω + ω₀ + λ)/2, frequency of the conserved pair number n₀+n_A."""
        return (self.omega + self.omega0 + self.lam) / 2.0

    @property
    def omega2(self) -> float:
        """Ω₂ = (ω − ω₀ + λ)/2, detuning that multiplies J_z."""
        return (self.omega - self.omega0 + self.lam) / 2.0

    @property
    def omega_b(self) -> float:
        """ω_B = ω − λ, frequency of the decoupled antisymmetric mode."""
        return self.omega - self.lam


@dataclass(frozen=True)
class HermitianMatrix:
    """Dense Hermitian operator over a FockBasis."""

    basis: FockBasis
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        dim = len(self.basis)
        if m.shape != (dim, dim):
            raise ValueError(f"entries have shape {m.shape}, basis needs ({dim}, {dim})")
        defect = float(np.max(np.abs(m - m.conj().T))) if dim else 0.0
        scale = max(1.0, float(np.max(np.abs(m)))) if dim else 1.0
        if defect > HERMITICITY_TOL * scale:
            raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))


def _require_three_modes(basis: FockBasis) -> None:
    if basis.mode_count != 3:
        raise ValueError(f"this operation needs a three-mode basis, got {basis.mode_count} modes")


def build_hamiltonian(params: WaveguideParams, basis: FockBasis) -> HermitianMatrix:
    """Matrix of the three-mode Hamiltonian on a fixed-N basis.

    Block-diagonality in N is automatic: every term conserves the total photon
    number, so the fixed-N basis is closed under the action of H.
    """
    _require_three_modes(basis)
    h = (params.omega0 * number_matrix(basis, 0)
         + params.omega * (number_matrix(basis, 1) + number_matrix(basis, 2))
         + params.lam * (transfer_matrix(basis, 1, 2) + transfer_matrix(basis, 2, 1))
         + params.g * (transfer_matrix(basis, 1, 0) + transfer_matrix(basis, 2, 0)
                       + transfer_matrix(basis, 0, 1) + transfer_matrix(basis, 0, 2)))
    return HermitianMatrix(basis, h)


def build_reduced_hamiltonian(params: WaveguideParams, basis: FockBasis) -> HermitianMatrix:
    """Matrix of the collective-mode Hamiltonian, modes ordered (a₀, A, B).

    Only the symmetric mode A couples to mode 0 (rate √2·g); B is a spectator
    with frequency ω−λ.
    """
    _require_three_modes(basis)
    h = (params.omega0 * number_matrix(basis, 0)
         + (params.omega + params.lam) * number_matrix(basis, 1)
         + (params.omega - params.lam) * number_matrix(basis, 2)
         + SQRT2 * params.g * (transfer_matrix(basis, 1, 0) + transfer_matrix(basis, 0, 1)))
    return HermitianMatrix(basis, h)


class CollectiveGenerators(NamedTuple):
    """Matrix representation of the coupling algebra on an (a₀, A, B) basis.

    j_plus = a₀A†, j_minus = a₀†A, j_z = A†A − a₀†a₀ obey
    [J₊, J₋] = J_z, [J_z, J₊] = 2J₊, [J_z, J₋] = −2J₋.
    n_pair = a₀†a₀ + A†A and n_spectator = B†B commute with all three.
    """

    j_plus: np.ndarray
    j_minus: np.ndarray
    j_z: np.ndarray
    n_pair: np.ndarray
    n_spectator: np.ndarray


@lru_cache(maxsize=None)
def collective_generators(basis: FockBasis) -> CollectiveGenerators:
    _require_three_modes(basis)
    return CollectiveGenerators(
        j_plus=transfer_matrix(basis, 1, 0),
        j_minus=transfer_matrix(basis, 0, 1),
        j_z=number_matrix(basis, 1) - number_matrix(basis, 0),
        n_pair=number_matrix(basis, 0) + number_matrix(basis, 1),
        n_spectator=number_matrix(basis, 2),
    )


@lru_cache(maxsize=None)
def mode_transform(basis: FockBasis) -> np.ndarray:
    """Unitary expressing original kets |n₀n₁n₂⟩ in the (a₀, A, B) Fock basis.

    Column k holds the expansion of the k-th original ket, obtained by
    expanding (a₁†)^{n₁}(a₂†)^{n₂}|vac⟩ with a₁† = (A†+B†)/√2 and
    a₂† = (A†−B†)/√2.  Coefficients are assembled from exact rationals
    (binomial sums and factorial ratios) before the final square root, so no
    error accumulates in powers of √2.  The matrix is real, orthogonal and an
    involution: applying the transformation twice is the identity.
    """
    _require_three_modes(basis)
    dim = len(basis)
    out = np.zeros((dim, dim))
    for k, state in enumerate(basis.states):
        n0, n1, n2 = state.occupations
        for p in range(n1 + n2 + 1):
            q = n1 + n2 - p
            coeff = 0
            for i in range(max(0, p - n2), min(n1, p) + 1):
                j = p - i
                coeff += math.comb(n1, i) * math.comb(n2, j) * (-1) ** (n2 - j)
            if coeff == 0:
                continue
            ratio = Fraction(math.factorial(p) * math.factorial(q) * coeff * coeff,
                             math.factorial(n1) * math.factorial(n2) * 2 ** (n1 + n2))
            row = basis.index_of(FockState((n0, p, q)))
            out[row, k] = math.copysign(math.sqrt(float(ratio)), coeff)
    out.flags.writeable = False
    return out


def verify_similarity(params: WaveguideParams, total_quanta: int) -> float:
    """Max-abs deviation of U_T·H_original·U_T† from the collective-mode form.

    Both matrices represent the same operator, so the deviation is pure
    floating-point noise (≤ 1e−12 for the supported parameter ranges).
    """
    if total_quanta > 6:
        raise ValueError("similarity check supports total_quanta <= 6")
    from .fock import enumerate_basis

    basis = enumerate_basis(3, total_quanta)
    u_t = mode_transform(basis)
    h = build_hamiltonian(params, basis).entries
    h_red = build_reduced_hamiltonian(params, basis).entries
    return float(np.max(np.abs(u_t @ h @ u_t.conj().T - h_red)))
