"""Shared fixtures and independent test-side oracles.

The oracles here deliberately avoid the library's own code paths: the matrix
exponential uses Taylor scaling-and-squaring (the library oracle uses eigh),
and the 2×2 Gauss decomposition extracts the disentangling functions from a
closed-form exponential rather than evaluating their formulas.
"""

import cmath
import math

import numpy as np
import pytest

from noonsim import REFERENCE_PARAMS, enumerate_basis, reference_initial_state

SQRT2 = math.sqrt(2.0)


@pytest.fixture
def ref_params():
    return REFERENCE_PARAMS


@pytest.fixture
def ref_initial():
    return reference_initial_state()


@pytest.fixture
def basis33():
    return enumerate_basis(3, 3)


def expm_taylor(matrix: np.ndarray) -> np.ndarray:
    """Scaling-and-squaring Taylor series; an oracle independent of eigh."""
    a = np.asarray(matrix, dtype=complex)
    norm = np.linalg.norm(a, ord=np.inf)
    squarings = max(0, int(math.ceil(math.log2(max(norm, 1e-300)))) + 1)
    a = a / (2 ** squarings)
    result = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, 40):
        term = term @ a / k
        result = result + term
        if np.max(np.abs(term)) < 1e-20:
            break
    for _ in range(squarings):
        result = result @ result
    return result


def su2_matrix(omega2: float, g: float, t: float) -> np.ndarray:
    """exp(−it[Ω₂σ_z + √2g·σ_x]) in closed form (Rabi rotation)."""
    omega = math.hypot(SQRT2 * g, omega2)
    u = omega * t
    gen = np.array([[omega2, SQRT2 * g], [SQRT2 * g, -omega2]], dtype=complex)
    if omega == 0.0:
        return np.eye(2, dtype=complex)
    return math.cos(u) * np.eye(2) - 1j * (math.sin(u) / omega) * gen


def gauss_decompose(omega2: float, g: float, t: float):
    """(f1, f2, f3) read off the 2×2 exponential's triangular factorization.

    For U = [[a, b], [c, d]] with the J_z=+1 state first:
    e^{if2} = d, f1 = i·b/d, f3 = i·c/d.  f2 is the principal-branch value.
    """
    u = su2_matrix(omega2, g, t)
    d = u[1, 1]
    f1 = 1j * u[0, 1] / d
    f3 = 1j * u[1, 0] / d
    f2 = -1j * cmath.log(d)
    return f1, f2, f3


def random_detuned_params(rng, count):
    """Parameter sets with g in [0.005, 0.05] and |Ω₂| <= 0.1, ω fixed at 1."""
    from noonsim import WaveguideParams

    out = []
    for _ in range(count):
        g = rng.uniform(0.005, 0.05)
        omega2 = rng.uniform(-0.1, 0.1)
        lam = rng.uniform(0.0, 0.02)
        omega = 1.0
        out.append(WaveguideParams(omega0=omega + lam - 2 * omega2,
                                   omega=omega, lam=lam, g=g))
    return out
