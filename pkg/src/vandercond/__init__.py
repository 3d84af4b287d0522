"""High-precision conditioning of Vandermonde and Fourier submatrices.

The package measures condition numbers of submatrices of the N x N Fourier
matrix (and of Vandermonde matrices with nodes on the unit circle) in
arbitrary precision, and compares them against the closed-form growth rates
driven by the Clausen function.  Everything numerical runs on gmpy2/MPFR;
the one-sided Jacobi SVD kernel has a compiled core with a pure-Python
fallback (set ``VANDERCOND_PURE_PYTHON=1`` to force the fallback).
"""

from .precision import PrecisionContext, ctx_new, unit_point, DEFAULT_BITS
from .errors import (
    VandercondError,
    ConfigurationError,
    DomainError,
    PoleError,
    DegeneracyError,
    RegimeError,
    ConvergenceError,
    UnsupportedMeasureError,
    PreconditionError,
)
from .clausen import clausen, catalan, log_cot_integral, clausen_identity_scan
from .quadrature import integrate
from .potentials import (
    EquispacedFamily,
    family,
    potential_U,
    potential_Uk,
    envelopes,
)
from .lagrange import (
    NodeSet,
    node_set,
    equispaced_node_set,
    lagrange_coeffs,
    circle_mean_square,
    max_on_circle,
)
from .measures import (
    Measure,
    arc_uniform,
    circle_uniform,
    discrete_uniform,
    disk_uniform,
    potential,
    ks_distance,
    regularity_check,
    potential_diff_bound,
    rate_delta,
    lagrange_sup_rate,
    RegularityParams,
)
from .matrices import (
    Matrix,
    SubmatrixSpec,
    SpectralReport,
    submatrix_spec,
    fourier_submatrix,
    general_submatrix,
    vandermonde,
    svd_factors,
    svd_jacobi,
    kappa_submatrix,
    inverse_column_norms,
    det_log_vandermonde,
    rectangular_sandwich,
)
from .bounds import (
    Regime,
    BoundsReport,
    thm_main_rate,
    corollary_contiguous,
    catalan_cap,
    barnett_lower,
    regime_classify,
    bounds_report,
)

__version__ = "0.1.0"

__all__ = [
    "PrecisionContext", "ctx_new", "unit_point", "DEFAULT_BITS",
    "VandercondError", "ConfigurationError", "DomainError", "PoleError",
    "DegeneracyError", "RegimeError", "ConvergenceError",
    "UnsupportedMeasureError", "PreconditionError",
    "clausen", "catalan", "log_cot_integral", "clausen_identity_scan",
    "integrate",
    "EquispacedFamily", "family", "potential_U", "potential_Uk", "envelopes",
    "NodeSet", "node_set", "equispaced_node_set", "lagrange_coeffs",
    "circle_mean_square", "max_on_circle",
    "Measure", "arc_uniform", "circle_uniform", "discrete_uniform",
    "disk_uniform", "potential", "ks_distance", "regularity_check",
    "potential_diff_bound", "rate_delta", "lagrange_sup_rate",
    "RegularityParams",
    "Matrix", "SubmatrixSpec", "SpectralReport", "submatrix_spec",
    "fourier_submatrix", "general_submatrix", "vandermonde", "svd_factors",
    "svd_jacobi", "kappa_submatrix", "inverse_column_norms",
    "det_log_vandermonde", "rectangular_sandwich",
    "Regime", "BoundsReport", "thm_main_rate", "corollary_contiguous",
    "catalan_cap", "barnett_lower", "regime_classify", "bounds_report",
    "__version__",
]
