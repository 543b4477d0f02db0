"""Sparse QCQP solving by greedy conditioning of principal-minor polynomials.

The optimization problem: maximize x'A0x subject to x'A1x = 1 with at most
k nonzero entries of x.  The library scores candidate supports through
linear combinations of principal minors of the pencil t*A1 - A0, whose
largest real root is a certified lower bound on the optimum; a greedy loop
conditions the polynomial on one index per round.  Front ends cover sparse
PCA and sparse linear regression (closed form, no root finding), plus an
orthogonal-matching-pursuit baseline and brute-force verification oracles.
"""

__version__ = "0.1.0"

from .exceptions import (
    BudgetError,
    DegenerateDesignError,
    ExhaustedSupportError,
    InfeasibleSupportError,
    InputError,
    NumericalError,
    SingularPivotError,
    SparseQcqpError,
    ZeroPolynomialError,
)
from .linalg import (
    EigenDecomposition,
    diagonalize,
    inner_qcqp_solve,
    schur_complement,
    update_diagonalization,
    validate_support,
    validate_symmetric,
)
from .charpoly import (
    char_coeff,
    conditionals_vector,
    elem_sym,
    grad_char_diag,
    leave_one_out,
)
from .lpm import (
    CharCoeffOracle,
    EtaResult,
    ExplicitLpmOracle,
    LpmOracle,
    UnivariatePoly,
    cauchy_bound,
    conditional_eval,
    constrained_char_oracle,
    eta,
    max_root_newton,
    restrict_univariate,
    reweighted_oracle,
)
from .solver import (
    GreedyTrace,
    Round,
    approx_bound_certificate,
    characteristic_method,
    exactness_check,
    greedy_conditioning,
    pencil_nodes,
)
from .apps import (
    SolveReport,
    omp_baseline,
    sparse_pca_solve,
    sparse_regression_eta,
    sparse_regression_solve,
    volume_sampling_expectation,
)
from .verify import (
    BruteForceResult,
    CheckResult,
    OracleBudget,
    brute_force_qcqp,
    lpm_direct_eval,
    real_rootedness_check,
    run_property_suite,
)
from .data import (
    Dataset,
    correlation_matrix,
    ingest_csv,
    pitprops_correlation,
    standardize,
)
from .estimators import GreedySparsePCA, GreedySparseRegressor, OmpRegressor

__all__ = [
    "__version__",
    # exceptions
    "SparseQcqpError", "InputError", "BudgetError", "NumericalError",
    "SingularPivotError", "InfeasibleSupportError", "DegenerateDesignError",
    "ZeroPolynomialError", "ExhaustedSupportError",
    # linear algebra kernels
    "EigenDecomposition", "diagonalize", "update_diagonalization",
    "schur_complement", "inner_qcqp_solve", "validate_symmetric",
    "validate_support",
    # characteristic coefficients
    "elem_sym", "char_coeff", "leave_one_out", "grad_char_diag",
    "conditionals_vector",
    # LPM polynomials
    "LpmOracle", "CharCoeffOracle", "ExplicitLpmOracle", "UnivariatePoly",
    "EtaResult", "reweighted_oracle", "constrained_char_oracle",
    "conditional_eval", "restrict_univariate", "cauchy_bound",
    "max_root_newton", "eta",
    # solver
    "greedy_conditioning", "characteristic_method", "pencil_nodes",
    "GreedyTrace", "Round", "approx_bound_certificate", "exactness_check",
    # applications
    "SolveReport", "sparse_regression_solve", "sparse_regression_eta",
    "volume_sampling_expectation", "omp_baseline", "sparse_pca_solve",
    # verification
    "OracleBudget", "BruteForceResult", "CheckResult", "brute_force_qcqp",
    "lpm_direct_eval", "real_rootedness_check", "run_property_suite",
    # data
    "Dataset", "ingest_csv", "standardize", "correlation_matrix",
    "pitprops_correlation",
    # estimators
    "GreedySparseRegressor", "OmpRegressor", "GreedySparsePCA",
]
