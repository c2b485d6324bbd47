"""Self-contained verification suites behind the `verify` CLI command.

Each suite exercises one cross-validation route with deterministic inputs
(fixed RNG seeds) and reports max deviations against pinned tolerances:

* similarity     — collective-mode form vs conjugated original Hamiltonian,
                   plus unitarity of the basis change.
* factorization  — analytic factorized propagator vs the eigendecomposition
                   oracle, reference scenario and randomized detunings.
* wei-norman     — RK4-integrated disentangling functions vs their closed
                   forms and vs direct 2×2 exponentials, plus the 4th-order
                   convergence check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .evolution import (REFERENCE_PARAMS, disentangle_coeffs, propagator_analytic,
                        propagator_oracle)
from .fock import enumerate_basis
from .hamiltonian import WaveguideParams, build_hamiltonian, mode_transform, verify_similarity
from .weinorman import factor_product_2x2, integrate_wn, su2_exponential

SUITE_NAMES = ("similarity", "factorization", "wei-norman")

_SEED = 20230917


@dataclass(frozen=True)
class CheckResult:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance


def _random_params(rng, count: int) -> list[WaveguideParams]:
    out = []
    for _ in range(count):
        g = rng.uniform(0.005, 0.05)
        omega2 = rng.uniform(-0.1, 0.1)
        lam = rng.uniform(0.0, 0.02)
        omega = 1.0
        # omega0 chosen so the detuning (omega - omega0 + lam)/2 equals omega2
        out.append(WaveguideParams(omega0=omega + lam - 2 * omega2, omega=omega,
                                   lam=lam, g=g))
    return out


def similarity_suite() -> list[CheckResult]:
    rng = np.random.default_rng(_SEED)
    params_sets = [REFERENCE_PARAMS,
                   WaveguideParams(0.9, 1.1, 0.005, 0.01)] + _random_params(rng, 3)
    worst_sim = 0.0
    worst_unitary = 0.0
    for params in params_sets:
        for total in range(0, 5):
            worst_sim = max(worst_sim, verify_similarity(params, total))
            basis = enumerate_basis(3, total)
            u_t = mode_transform(basis)
            worst_unitary = max(worst_unitary, float(np.max(np.abs(
                u_t @ u_t.conj().T - np.eye(len(basis))))))
    return [CheckResult("similarity: transformed vs collective-mode Hamiltonian",
                        worst_sim, 1e-12),
            CheckResult("similarity: mode transform unitarity", worst_unitary, 1e-12)]


def factorization_suite() -> list[CheckResult]:
    rng = np.random.default_rng(_SEED + 1)
    basis = enumerate_basis(3, 3)
    u_t = mode_transform(basis)
    worst = 0.0
    worst_unitarity = 0.0
    for params in [REFERENCE_PARAMS] + _random_params(rng, 5):
        h = build_hamiltonian(params, basis)
        for t in np.linspace(0.0, 200.0, 50):
            analytic = propagator_analytic(params, basis, float(t))
            oracle = propagator_oracle(h, float(t))
            conjugated = u_t @ oracle.matrix @ u_t.conj().T
            worst = max(worst, float(np.max(np.abs(analytic.matrix - conjugated))))
            worst_unitarity = max(worst_unitarity, analytic.unitarity_defect())
    return [CheckResult("factorization: analytic vs oracle propagator", worst, 1e-9),
            CheckResult("factorization: analytic propagator unitarity",
                        worst_unitarity, 1e-9)]


def weinorman_suite() -> list[CheckResult]:
    results = []

    # Closed-form reproduction, Ω₂ = 0 (f1 = tan, f2 = −i·ln cos).
    run = integrate_wn(0.0, 0.01, t_end=50.0, step=0.01)
    closed = disentangle_coeffs(REFERENCE_PARAMS, 50.0)
    dev = max(abs(run.f1[-1] - closed.f1), abs(run.f2[-1] - closed.f2))
    results.append(CheckResult("wei-norman: closed forms at t=50 (zero detuning)",
                               dev, 1e-6))
    results.append(CheckResult("wei-norman: f3 = f1 along trajectory",
                               run.max_f3_f1_gap(), 1e-8))

    # Detuned run against the direct 2×2 exponential.
    omega2, g = 0.02, 0.01
    run = integrate_wn(omega2, g, t_end=30.0, step=0.005)
    direct = su2_exponential(omega2, g, 30.0)
    rebuilt = factor_product_2x2(run.f1[-1], run.f2[-1], run.f3[-1])
    results.append(CheckResult("wei-norman: 2x2 factorization identity at t=30",
                               float(np.max(np.abs(rebuilt - direct))), 1e-6))

    # Step halving: terminal error should drop ~16x (4th order).  Steps are
    # chosen so truncation dominates; much finer and the roundoff floor of
    # the thousands of accumulated steps drowns the signal.
    closed = disentangle_coeffs(REFERENCE_PARAMS, 50.0)
    err = []
    for step in (2.5, 1.25):
        run = integrate_wn(0.0, 0.01, t_end=50.0, step=step)
        err.append(abs(run.f1[-1] - closed.f1))
    ratio = err[0] / err[1] if err[1] > 0 else math.inf
    results.append(CheckResult(
        f"wei-norman: step-halving error ratio {ratio:.2f} (expect ~16)",
        abs(ratio - 16.0), 4.0))
    return results


def run_suite(name: str) -> list[CheckResult]:
    suites = {
        "similarity": similarity_suite,
        "factorization": factorization_suite,
        "wei-norman": weinorman_suite,
    }
    if name == "all":
        out = []
        for key in SUITE_NAMES:
            out.extend(suites[key]())
        return out
    if name not in suites:
        raise ValueError(f"unknown suite {name!r}; choose from "
                         f"{', '.join(SUITE_NAMES)} or 'all'")
    return suites[name]()
