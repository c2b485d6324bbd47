"""ODE route to the disentangling functions, and the adjoint-action identities.

Writing exp(−it[Ω₂J_z + √2g(J₊+J₋)]) as the ordered product
exp(−if₁J₊)·exp(−if₂J_z)·exp(−if₃J₋), differentiating in t and matching
generator coefficients yields a coupled ODE system for the scalar functions.
Solved for the derivatives it becomes triangular:

    f₁' = √2g·(1 + f₁²) − 2iΩ₂·f₁
    f₂' = Ω₂ + i√2g·f₁
    f₃' = √2g·e^{−2if₂}

with f₁(0) = f₂(0) = f₃(0) = 0, and f₃ ≡ f₁ along the flow.  The correctness
anchor for the signs and exponents is operational: the flow must reproduce
the factorization identity in the faithful 2×2 representation
(spin_half_generators below), which fixes every choice uniquely.

The integrator is classical fixed-step RK4; the functions are smooth away
from the Ω₂ = 0 log-singularities of f₂ (where f₁ has poles), and those are
detected up front rather than stepped over.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .evolution import disentangle_coeffs  # noqa: F401  (re-exported for convenience)
from .fock import enumerate_basis
from .hamiltonian import collective_generators

SQRT2 = math.sqrt(2.0)


class SingularityProximityError(RuntimeError):
    """The requested time span runs within 1e−3 of a factorization singularity."""

    def __init__(self, singular_time: float):
        self.singular_time = singular_time
        super().__init__(
            f"integration span passes within 1e-3 of the factorization "
            f"singularity at t = {singular_time:.6f} (cos(sqrt(2) g t) = 0)")


@dataclass(frozen=True)
class WNTrajectory:
    """Sampled disentangling functions along an integration run."""

    times: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    f3: np.ndarray
    omega2: float
    g: float

    def __post_init__(self):
        for name in ("times", "f1", "f2", "f3"):
            arr = np.asarray(getattr(self, name))
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def max_f3_f1_gap(self) -> float:
        return float(np.max(np.abs(self.f3 - self.f1)))


def wn_rhs(f1: complex, f2: complex, f3: complex,
           omega2: float, g: float) -> tuple[complex, complex, complex]:
    """Derivatives (df₁/dt, df₂/dt, df₃/dt) of the solved system at one point."""
    root2g = SQRT2 * g
    df1 = root2g * (1.0 + f1 * f1) - 2j * omega2 * f1
    df2 = omega2 + 1j * root2g * f1
    df3 = root2g * cmath.exp(-2j * f2)
    return df1, df2, df3


def _nearest_singularity(g: float, t_end: float) -> float | None:
    # Ω₂ = 0 singular times: cos(√2 g t) = 0, i.e. t = (π/2 + nπ)/(√2|g|).
    big_g = SQRT2 * abs(g)
    if big_g == 0.0:
        return None
    period = math.pi / big_g
    first = (math.pi / 2) / big_g
    n = 0
    while True:
        t_sing = first + n * period
        if t_sing > t_end + 1e-3:
            return None
        if t_sing >= -1e-3:
            return t_sing
        n += 1


def integrate_wn(omega2: float, g: float, t_end: float, step: float) -> WNTrajectory:
    """Fixed-step RK4 integration of the system from (0, 0, 0) up to t_end.

    The step is shrunk slightly, if needed, so an integer number of steps
    lands exactly on t_end.  For Ω₂ = 0 the run refuses (with the singular
    time named) whenever the span comes within 1e−3 of a pole of f₁.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if t_end <= 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    if omega2 == 0.0:
        t_sing = _nearest_singularity(g, t_end)
        if t_sing is not None:
            raise SingularityProximityError(t_sing)

    n_steps = max(1, math.ceil(t_end / step - 1e-12))
    h = t_end / n_steps

    def rhs(y):
        return np.array(wn_rhs(y[0], y[1], y[2], omega2, g), dtype=complex)

    y = np.zeros(3, dtype=complex)
    times = np.empty(n_steps + 1)
    samples = np.empty((n_steps + 1, 3), dtype=complex)
    times[0] = 0.0
    samples[0] = y
    for i in range(n_steps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y.view(float))):
            raise RuntimeError(f"integration blew up near t = {(i + 1) * h:.6f}")
        times[i + 1] = (i + 1) * h
        samples[i + 1] = y
    return WNTrajectory(times=times, f1=samples[:, 0], f2=samples[:, 1],
                        f3=samples[:, 2], omega2=float(omega2), g=float(g))


# --- faithful 2×2 representation of the coupling algebra ---

def spin_half_generators() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(J₊, J₋, J_z) as 2×2 matrices satisfying the same commutation relations."""
    j_plus = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    j_minus = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
    j_z = np.diag([1.0, -1.0]).astype(complex)
    return j_plus, j_minus, j_z


def su2_exponential(omega2: float, g: float, t: float) -> np.ndarray:
    """exp(−it[Ω₂J_z + √2g(J₊+J₋)]) in the 2×2 representation, in closed form."""
    omega = math.hypot(SQRT2 * g, omega2)
    if omega == 0.0:
        return np.eye(2, dtype=complex)
    u = omega * t
    j_plus, j_minus, j_z = spin_half_generators()
    generator = omega2 * j_z + SQRT2 * g * (j_plus + j_minus)
    return math.cos(u) * np.eye(2) - 1j * (math.sin(u) / omega) * generator


def factor_product_2x2(f1: complex, f2: complex, f3: complex) -> np.ndarray:
    """exp(−if₁J₊)·exp(−if₂J_z)·exp(−if₃J₋) in the 2×2 representation."""
    j_plus, j_minus, _ = spin_half_generators()
    e_plus = np.eye(2) - 1j * f1 * j_plus
    e_minus = np.eye(2) - 1j * f3 * j_minus
    d_z = np.diag([cmath.exp(-1j * f2), cmath.exp(1j * f2)])
    return e_plus @ d_z @ e_minus


def _fock_generators():
    gen = collective_generators(enumerate_basis(3, 3))
    return gen.j_plus, gen.j_minus, gen.j_z


def _nilpotent_exp(coefficient: complex, mat: np.ndarray, order: int) -> np.ndarray:
    acc = np.eye(mat.shape[0], dtype=complex)
    term = np.eye(mat.shape[0], dtype=complex)
    for k in range(1, order + 1):
        term = term @ mat * (coefficient / k)
        acc = acc + term
    return acc


@dataclass(frozen=True)
class AdjointReport:
    """Max entrywise deviations of the three adjoint-action identities."""

    jz_under_jplus: float
    jminus_under_jz: float
    jminus_under_jplus: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return max(self.jz_under_jplus, self.jminus_under_jz,
                   self.jminus_under_jplus) <= self.tolerance


def verify_adjoint_identities(f1: complex, f2: complex, tol: float = 1e-9) -> AdjointReport:
    """Check the three conjugation identities in the 2×2 and N=3 representations.

        e^{−if₁J₊} J_z e^{if₁J₊} = J_z + 2if₁J₊
        e^{−if₂J_z} J₋ e^{if₂J_z} = e^{2if₂} J₋
        e^{−if₁J₊} J₋ e^{if₁J₊} = J₋ − if₁J_z + f₁²J₊

    Reports the max deviation per identity across both representations.
    """
    devs = [0.0, 0.0, 0.0]
    reps = [(*spin_half_generators(), 1), (*_fock_generators(), 3)]
    for j_plus, j_minus, j_z, order in reps:
        e_plus = _nilpotent_exp(-1j * f1, j_plus, order)
        e_plus_inv = _nilpotent_exp(1j * f1, j_plus, order)
        jz_diag = np.real(np.diag(j_z))
        d_z = np.diag(np.exp(-1j * f2 * jz_diag))
        d_z_inv = np.diag(np.exp(1j * f2 * jz_diag))

        lhs = e_plus @ j_z @ e_plus_inv
        devs[0] = max(devs[0], float(np.max(np.abs(lhs - (j_z + 2j * f1 * j_plus)))))

        lhs = d_z @ j_minus @ d_z_inv
        devs[1] = max(devs[1], float(np.max(np.abs(lhs - cmath.exp(2j * f2) * j_minus))))

        lhs = e_plus @ j_minus @ e_plus_inv
        rhs = j_minus - 1j * f1 * j_z + f1 * f1 * j_plus
        devs[2] = max(devs[2], float(np.max(np.abs(lhs - rhs))))
    return AdjointReport(devs[0], devs[1], devs[2], tolerance=float(tol))
