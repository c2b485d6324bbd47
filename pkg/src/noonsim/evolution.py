"""Time evolution via two independent routes.

The oracle route diagonalizes the Hermitian Hamiltonian and exponentiates its
spectrum — brute force, no structure assumed.  The analytic route builds the
propagator as the ordered product

    U(t) = e^{−itω_B n_B} · e^{−itΩ₁ C} · e^{−if₁ J₊} · e^{−if₂ J_z} · e^{−if₁ J₋}

on an (a₀, A, B)-ordered basis, where the scalar disentangling functions f₁,
f₂ come in closed form from the two-level (su(2)) structure of the coupling.
Both routes must agree to 1e−9; the oracle is the ground truth.

Numerical notes
---------------
* f₂ = −i·ln[...] needs a branch rule.  We take θ = π/2 − i·asinh(Ω₂/(√2g)),
  which makes f₁(0) = f₂(0) = 0, and unwind the logarithm so f₂ is continuous
  in t (the argument e^{if₂} = cos Ωt + i(Ω₂/Ω) sin Ωt traces an ellipse whose
  winding is known in closed form).
* Where |e^{if₂}| → 0 (possible only for Ω₂ = 0, at cos(√2 g t) = 0) the
  triangular factorization is intrinsically ill-conditioned: the three J
  factors hold intermediates of size |e^{if₂}|^{−N} that cancel to O(1).
  Below a conditioning threshold the same factored product is evaluated in
  extended precision (mpmath) and rounded once at the end; at an exact zero
  the evaluation time is nudged by 1e−9 with a SingularTimeWarning.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .fock import FockBasis, FockState, StateVector, enumerate_basis, state_from_kets
from .hamiltonian import (HermitianMatrix, WaveguideParams, build_hamiltonian,
                          collective_generators, mode_transform)

SQRT2 = math.sqrt(2.0)

# |e^{if2}| below which the factored product is evaluated in extended precision.
# Double-precision error grows like eps/|e^{if2}|^N; this keeps it under ~1e-11
# for N <= 6.
_MP_THRESHOLD = 0.05
_MP_DPS = 60

# |e^{if2}| treated as an exact singular time (pole of f1, log-pole of f2).
_POLE_TOL = 1e-14
_POLE_OFFSET = 1e-9


class DegenerateCouplingError(ValueError):
    """g = 0 leaves nothing to disentangle; the Hamiltonian is already diagonal."""


class EigendecompositionError(RuntimeError):
    """Hermitian eigendecomposition failed; carries matrix diagnostics."""


class SingularTimeWarning(UserWarning):
    """The factorization is singular at the requested time; it was nudged by ε."""


@dataclass(frozen=True)
class DisentangleCoeffs:
    """Scalar functions of the factorized propagator at one time.

    f3 always equals f1 for this algebra; theta is the (complex) phase offset
    fixing the branch with f1(0) = f2(0) = 0.
    """

    f1: complex
    f2: complex
    f3: complex
    theta: complex
    t: float


@dataclass(frozen=True)
class Propagator:
    """Dense unitary evolution matrix over a FockBasis at time t."""

    basis: FockBasis
    matrix: np.ndarray
    t: float
    method: str  # 'oracle' | 'analytic'

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def unitarity_defect(self) -> float:
        eye = np.eye(len(self.basis))
        return float(np.max(np.abs(self.matrix @ self.matrix.conj().T - eye)))


def propagator_oracle(hamiltonian: HermitianMatrix, t: float) -> Propagator:
    """exp(−iHt) by Hermitian eigendecomposition (real spectrum, unitary frame)."""
    try:
        evals, evecs = np.linalg.eigh(hamiltonian.entries)
    except np.linalg.LinAlgError as exc:
        raise EigendecompositionError(
            f"eigh failed on a {hamiltonian.entries.shape} matrix "
            f"(max |entry| {np.max(np.abs(hamiltonian.entries)):.3e}): {exc}") from exc
    u = (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T
    return Propagator(hamiltonian.basis, u, float(t), "oracle")


def _phase_factor(omega2: float, g: float, t: float) -> complex:
    """e^{if₂(t)} = cos(Ωt) + i(Ω₂/Ω)·sin(Ωt); its modulus controls conditioning."""
    omega = math.hypot(SQRT2 * g, omega2)
    u = omega * t
    return complex(math.cos(u), (omega2 / omega) * math.sin(u))


def disentangle_coeffs(params: WaveguideParams, t: float) -> DisentangleCoeffs:
    """Evaluate the closed-form disentangling functions at time t.

    With Ω = √(2g² + Ω₂²) and θ = π/2 − i·asinh(Ω₂/(√2g)):

        f₁(t) = i·Ω₂/(√2g) − (Ω/(√2g))·cot(θ + Ωt)
        f₂(t) = −i·ln[(√2g/Ω)·sin(θ + Ωt)]

    The logarithm is unwound so f₂ is continuous in t and f₂(0) = 0.  For
    Ω₂ = 0 this reduces to f₁ = tan(√2 g t), f₂ = −i·ln cos(√2 g t), with
    log-singularities at cos(√2 g t) = 0 (handled by the propagator, not
    here).  A negative g flips the sign of f₁ and f₃ only.
    """
    g = params.g
    if g == 0.0:
        raise DegenerateCouplingError(
            "g = 0: the coupling term vanishes and the Hamiltonian is diagonal; "
            "use the oracle propagator instead")
    big_g = SQRT2 * abs(g)
    omega2 = params.omega2
    omega = math.hypot(big_g, omega2)
    theta = math.pi / 2 - 1j * math.asinh(omega2 / big_g)

    f1 = 1j * omega2 / big_g - (omega / big_g) / cmath.tan(theta + omega * t)

    u = omega * t
    k = omega2 / omega
    w = complex(math.cos(u), k * math.sin(u))
    if k == 0.0:
        # Principal branch; e^{±if2} is branch-independent so the propagator
        # is unaffected, but f2 jumps by π across each log-singularity.
        f2 = -1j * cmath.log(w)
    else:
        half_turns = round(u / math.pi)
        v = u - half_turns * math.pi
        angle = math.copysign(math.pi, k) * half_turns + math.atan2(k * math.sin(v), math.cos(v))
        f2 = complex(angle, -math.log(abs(w)))

    if g < 0:
        f1 = -f1
    return DisentangleCoeffs(f1=f1, f2=f2, f3=f1, theta=theta, t=float(t))


@lru_cache(maxsize=None)
def _nilpotent_powers(basis: FockBasis):
    """J₊^k/k! and J₋^k/k! for k = 0..N; both ladders are nilpotent on fixed N."""
    gen = collective_generators(basis)
    n = basis.total_quanta

    def powers(j):
        out = [np.eye(len(basis), dtype=complex)]
        for k in range(1, n + 1):
            out.append(out[-1] @ j / k)
        return out

    return powers(gen.j_plus), powers(gen.j_minus)


@lru_cache(maxsize=None)
def _diagonals(basis: FockBasis):
    gen = collective_generators(basis)
    return (np.real(np.diag(gen.j_z)), np.real(np.diag(gen.n_pair)),
            np.real(np.diag(gen.n_spectator)))


def _assemble_double(params: WaveguideParams, basis: FockBasis, t: float) -> np.ndarray:
    coeffs = disentangle_coeffs(params, t)
    jp_pows, jm_pows = _nilpotent_powers(basis)
    jz_diag, pair_diag, spec_diag = _diagonals(basis)

    p_plus = sum(((-1j * coeffs.f1) ** k) * jp_pows[k] for k in range(len(jp_pows)))
    p_minus = sum(((-1j * coeffs.f3) ** k) * jm_pows[k] for k in range(len(jm_pows)))
    d_z = np.exp(-1j * coeffs.f2 * jz_diag)
    d_outer = np.exp(-1j * t * (params.omega1 * pair_diag + params.omega_b * spec_diag))
    return d_outer[:, None] * (p_plus @ (d_z[:, None] * p_minus))


@lru_cache(maxsize=None)
def _ladder_radicands(basis: FockBasis):
    """Integer radicands of the J₊/J₋ matrix elements, for exact rebuilds."""
    entries_plus, entries_minus = [], []
    for j, s in enumerate(basis.states):
        n0, na, nb = s.occupations
        if n0 > 0:
            i = basis.index_of(FockState((n0 - 1, na + 1, nb)))
            entries_plus.append((i, j, n0 * (na + 1)))
        if na > 0:
            i = basis.index_of(FockState((n0 + 1, na - 1, nb)))
            entries_minus.append((i, j, na * (n0 + 1)))
    return tuple(entries_plus), tuple(entries_minus)


def _assemble_extended(params: WaveguideParams, basis: FockBasis, t: float) -> np.ndarray:
    """Same factored product, evaluated at _MP_DPS digits and rounded once."""
    dim = len(basis)
    n = basis.total_quanta
    entries_plus, entries_minus = _ladder_radicands(basis)
    jz_diag, pair_diag, spec_diag = _diagonals(basis)
    with mpmath.workdps(_MP_DPS):
        g = mpmath.mpf(params.g)
        omega2 = (mpmath.mpf(params.omega) - mpmath.mpf(params.omega0)
                  + mpmath.mpf(params.lam)) / 2
        big_g = mpmath.sqrt(2) * abs(g)
        omega = mpmath.sqrt(big_g ** 2 + omega2 ** 2)
        theta = mpmath.pi / 2 - 1j * mpmath.asinh(omega2 / big_g)
        u = omega * t
        f1 = 1j * omega2 / big_g - (omega / big_g) / mpmath.tan(theta + u)
        k = omega2 / omega
        w = mpmath.cos(u) + 1j * k * mpmath.sin(u)
        if omega2 == 0:
            f2 = -1j * mpmath.log(w)
        else:
            half_turns = int(mpmath.nint(u / mpmath.pi))
            v = u - half_turns * mpmath.pi
            angle = (mpmath.sign(k) * mpmath.pi * half_turns
                     + mpmath.atan2(k * mpmath.sin(v), mpmath.cos(v)))
            f2 = angle - 1j * mpmath.log(abs(w))
        if params.g < 0:
            f1 = -f1

        j_plus = mpmath.zeros(dim, dim)
        for i, j, radicand in entries_plus:
            j_plus[i, j] = mpmath.sqrt(radicand)
        j_minus = mpmath.zeros(dim, dim)
        for i, j, radicand in entries_minus:
            j_minus[i, j] = mpmath.sqrt(radicand)

        def nilpotent_exp(c, mat):
            acc = mpmath.eye(dim)
            term = mpmath.eye(dim)
            for kk in range(1, n + 1):
                term = (term * mat) * (c / kk)
                acc += term
            return acc

        p_plus = nilpotent_exp(-1j * f1, j_plus)
        p_minus = nilpotent_exp(-1j * f1, j_minus)
        d_z = mpmath.diag([mpmath.e ** (-1j * f2 * int(m)) for m in jz_diag])
        mp_t = mpmath.mpf(t)
        omega1 = (mpmath.mpf(params.omega) + mpmath.mpf(params.omega0)
                  + mpmath.mpf(params.lam)) / 2
        omega_b = mpmath.mpf(params.omega) - mpmath.mpf(params.lam)
        d_outer = mpmath.diag([mpmath.e ** (-1j * mp_t * (omega1 * int(c) + omega_b * int(s)))
                               for c, s in zip(pair_diag, spec_diag)])
        product = d_outer * p_plus * d_z * p_minus
        return np.array([[complex(product[i, j]) for j in range(dim)] for i in range(dim)])


def propagator_analytic(params: WaveguideParams, basis_abb: FockBasis, t: float) -> Propagator:
    """Factorized propagator on an (a₀, A, B)-ordered fixed-N basis.

    Applies, right to left: exp(−if₁J₋), exp(−if₂J_z), exp(−if₁J₊) (the
    ladder exponentials are exact finite polynomials since J± are nilpotent
    on each fixed-pair-number subspace), then the diagonal phases
    exp(−itΩ₁(n₀+n_A)) and exp(−itω_B n_B).
    """
    if basis_abb.mode_count != 3:
        raise ValueError(f"analytic propagator needs a three-mode basis, "
                         f"got {basis_abb.mode_count} modes")
    if params.g == 0.0:
        raise DegenerateCouplingError(
            "g = 0: the coupling term vanishes and the Hamiltonian is diagonal; "
            "use the oracle propagator instead")

    t_eval = float(t)
    w_abs = abs(_phase_factor(params.omega2, params.g, t_eval))
    if w_abs < _POLE_TOL:
        t_eval = t_eval + _POLE_OFFSET
        w_abs = abs(_phase_factor(params.omega2, params.g, t_eval))
        warnings.warn(
            f"the factorization is singular at t={t}; evaluating at "
            f"t+{_POLE_OFFSET:g} instead (use the oracle for an exact value)",
            SingularTimeWarning, stacklevel=2)

    if w_abs < _MP_THRESHOLD:
        matrix = _assemble_extended(params, basis_abb, t_eval)
    else:
        matrix = _assemble_double(params, basis_abb, t_eval)
    return Propagator(basis_abb, matrix, float(t), "analytic")


@lru_cache(maxsize=None)
def _eigensystem(params: WaveguideParams, basis: FockBasis):
    h = build_hamiltonian(params, basis)
    try:
        evals, evecs = np.linalg.eigh(h.entries)
    except np.linalg.LinAlgError as exc:
        raise EigendecompositionError(
            f"eigh failed on a {h.entries.shape} matrix: {exc}") from exc
    evals.flags.writeable = False
    evecs.flags.writeable = False
    return evals, evecs


def evolve(state: StateVector, params: WaveguideParams, t: float,
           method: str = "analytic") -> StateVector:
    """Propagate a state given in the original (a₀, a₁, a₂) basis to time t.

    The analytic route conjugates through the collective-mode transform:
    amplitudes are rotated into the (a₀, A, B) basis, the factorized
    propagator is applied there, and the result is rotated back.  The oracle
    route applies exp(−iHt) directly.
    """
    basis = state.basis
    if basis.mode_count != 3:
        raise ValueError(f"evolution needs a three-mode basis, got {basis.mode_count} modes")
    if abs(state.norm_squared() - 1.0) > 1e-10:
        raise ValueError(f"state is not normalized (sum |amplitude|^2 = {state.norm_squared()!r})")

    if method == "oracle":
        evals, evecs = _eigensystem(params, basis)
        out = (evecs * np.exp(-1j * evals * t)) @ (evecs.conj().T @ state.amplitudes)
    elif method == "analytic":
        u_t = mode_transform(basis)
        collective = u_t @ state.amplitudes
        prop = propagator_analytic(params, basis, t)
        out = u_t.conj().T @ (prop.matrix @ collective)
    else:
        raise ValueError(f"method must be 'oracle' or 'analytic', got {method!r}")
    return StateVector(basis, out)


# --- the reference scenario: three photons, all frequencies 1, λ = 0, g = 0.01 ---

REFERENCE_PARAMS = WaveguideParams(omega0=1.0, omega=1.0, lam=0.0, g=0.01)


def reference_initial_state() -> StateVector:
    """(|102⟩ + |120⟩)/√2 on the N = 3 basis: one photon in the center, two in a side."""
    basis = enumerate_basis(3, 3)
    return state_from_kets(basis, {(1, 0, 2): 1 / SQRT2, (1, 2, 0): 1 / SQRT2})


def closed_form_coefficients(t: float) -> StateVector:
    """Hard-coded wave-function coefficients of the reference scenario at time t.

    Valid only for ω₀ = ω = 1, λ = 0, g = 0.01 and the initial state
    (|102⟩+|120⟩)/√2; the global phase e^{−3it} reflects the unit frequencies.
    Mode-exchange symmetry pins pairs of kets to a common coefficient:
    (|003⟩,|030⟩), (|012⟩,|021⟩), (|102⟩,|120⟩) and (|201⟩,|210⟩).
    """
    x = t / (50.0 * SQRT2)  # = √2 g t for g = 0.01
    phase = cmath.exp(-3j * t)
    sin_x, cos_x = math.sin(x), math.cos(x)
    sin_3x, cos_3x = math.sin(3 * x), math.cos(3 * x)

    c003 = -1j * math.sqrt(3) / 16 * (5 * sin_x + sin_3x) * phase
    c012 = 1j / 16 * (sin_x - 3 * sin_3x) * phase
    c102 = (5 * cos_x + 3 * cos_3x) / (8 * SQRT2) * phase
    c111 = -1.5 * sin_x ** 2 * cos_x * phase
    c201 = 1j / 8 * (sin_x - 3 * sin_3x) * phase
    c300 = -math.sqrt(1.5) * sin_x ** 2 * cos_x * phase

    basis = enumerate_basis(3, 3)
    return state_from_kets(basis, {
        (0, 0, 3): c003, (0, 3, 0): c003,
        (0, 1, 2): c012, (0, 2, 1): c012,
        (1, 0, 2): c102, (1, 2, 0): c102,
        (1, 1, 1): c111,
        (2, 0, 1): c201, (2, 1, 0): c201,
        (3, 0, 0): c300,
    })


def noon_times() -> tuple[float, float]:
    """The two times in [0, 200] where the reference scenario yields NOON states."""
    return (50 * SQRT2 * math.acos(1 / math.sqrt(3)),
            50 * SQRT2 * math.acos(-1 / math.sqrt(3)))
