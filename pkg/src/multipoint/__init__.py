"""Spectra and resolvents of selfadjoint boundary couplings of i d/dt + A_k
on (-inf, a1), (a2, b2), and (a3, +inf), for finite-dimensional coefficient
matrices and unitary coupling matrices W1, W2."""

from .boundary_triplet import (BoundaryValues, construct_witness, green_defect,
                               inner_gamma, outer_gamma)
from .errors import (ConvergenceError, GridMismatchError, MultipointError,
                     PointSpectrumError, SingularMatrixError, ValidationError)
from .linalg import (HermEig, UnitaryEig, det, expm_i_hermitian,
                     expm_scaling_squaring, herm_eig, solve_linear, unitary_eig)
from .model import (GridFunction, IntervalConfig, ProblemDefinition,
                    ToleranceConfig, TripleFunction, l2_inner_product, l2_norm,
                    load_problem, make_grid, problem_from_dict, problem_to_dict)
from .oracle import (MatchReport, SweepConfig, SweepResult, apply_expression,
                     compare_spectra, det_sweep_eigenvalues, rk4_fundamental)
from .pde_example import ExampleSpec, build_example_problem
from .resolvent import (ResolventSolution, apply_resolvent, resolvent_inner,
                        resolvent_norm_probe, resolvent_outer)
from .spectrum import (ProbeResult, SpectrumEntry, SpectrumReport,
                       assemble_report, eigenfunction_inner,
                       outer_norm_constancy, monodromy, point_spectrum)

__version__ = "0.1.0"

__all__ = [
    "BoundaryValues", "ConvergenceError", "ExampleSpec", "GridFunction",
    "GridMismatchError", "HermEig", "IntervalConfig", "MatchReport",
    "MultipointError", "PointSpectrumError", "ProbeResult",
    "ProblemDefinition", "ResolventSolution", "SingularMatrixError",
    "SpectrumEntry", "SpectrumReport", "SweepConfig", "SweepResult",
    "ToleranceConfig", "TripleFunction", "UnitaryEig", "ValidationError",
    "apply_expression", "apply_resolvent", "assemble_report",
    "build_example_problem", "compare_spectra", "construct_witness", "det",
    "det_sweep_eigenvalues", "eigenfunction_inner", "expm_i_hermitian",
    "expm_scaling_squaring", "green_defect", "herm_eig", "inner_gamma",
    "l2_inner_product", "l2_norm", "load_problem", "make_grid", "monodromy",
    "outer_gamma", "outer_norm_constancy", "point_spectrum",
    "problem_from_dict", "problem_to_dict", "resolvent_inner",
    "resolvent_norm_probe", "resolvent_outer", "rk4_fundamental",
    "solve_linear", "unitary_eig",
]
