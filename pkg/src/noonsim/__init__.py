"""noonsim: quantum light in three coupled waveguides.

Fixed-photon-number simulation of a three-waveguide array, with an analytic
factorized propagator cross-validated against a brute-force eigendecomposition
oracle, conditional-measurement collapse, and search for the post-selection
times that produce three-photon NOON states.
"""

from .evolution import (DegenerateCouplingError, DisentangleCoeffs,
                        EigendecompositionError, Propagator, REFERENCE_PARAMS,
                        SingularTimeWarning, closed_form_coefficients,
                        disentangle_coeffs, evolve, noon_times,
                        propagator_analytic, propagator_oracle,
                        reference_initial_state)
from .fock import (FockBasis, FockState, StateVector, apply_ladder, basis_state,
                   enumerate_basis, inner_product, number_matrix,
                   number_operator_expectation, state_from_kets, transfer_matrix)
from .hamiltonian import (HermitianMatrix, WaveguideParams, build_hamiltonian,
                          build_reduced_hamiltonian, collective_generators,
                          mode_transform, verify_similarity)
from .measurement import (CollapseResult, CollapseSample, CollapseSeries,
                          collapse_series, conditional_measure, noon_fidelity)
from .search import NoonEvent, SweepRow, find_noon_times, sweep
from .weinorman import (AdjointReport, SingularityProximityError, WNTrajectory,
                        integrate_wn, spin_half_generators, su2_exponential,
                        verify_adjoint_identities, wn_rhs)

__version__ = "0.1.0"

__all__ = [
    "AdjointReport", "CollapseResult", "CollapseSample", "CollapseSeries",
    "DegenerateCouplingError", "DisentangleCoeffs", "EigendecompositionError",
    "FockBasis", "FockState", "HermitianMatrix", "NoonEvent", "Propagator",
    "REFERENCE_PARAMS", "SingularTimeWarning", "SingularityProximityError",
    "StateVector", "SweepRow", "WNTrajectory", "WaveguideParams",
    "apply_ladder", "basis_state", "build_hamiltonian",
    "build_reduced_hamiltonian", "closed_form_coefficients",
    "collapse_series", "collective_generators", "conditional_measure",
    "disentangle_coeffs", "enumerate_basis", "evolve", "find_noon_times",
    "inner_product", "integrate_wn", "mode_transform", "noon_fidelity",
    "noon_times", "number_matrix", "number_operator_expectation",
    "propagator_analytic", "propagator_oracle", "reference_initial_state",
    "spin_half_generators", "state_from_kets", "su2_exponential", "sweep",
    "transfer_matrix", "verify_adjoint_identities", "verify_similarity",
    "wn_rhs",
]
