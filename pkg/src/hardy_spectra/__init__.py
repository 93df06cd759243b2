"""Spectral analysis of the multiplicative kernel k_alpha(n, m) = (nm)^(alpha-1/2) / max(n, m)^(2 alpha)."""
from ._validation import ConvergenceError, InconsistencyError
from .asymptotics import build_expansion, f_taylor, secular, solve_generalized
from .estimator import HardyKernelSpectrum
from .jacobi import (
    TridiagonalWindow,
    apply_factorized,
    inverse_residual,
    jacobi_matvec,
    jacobi_params,
    sturm_count,
    truncated_top_eigs,
)
from .kernel import TruncatedKernel, integral_form, kernel_entry, kernel_matrix, quadratic_form
from .rkt import RktReport, f_sequence, kernel_ratio, rkt_decision, rkt_supremum
from .special import lorentz_integrate, omega, zeta
from .spectrum import (
    SpectrumReport,
    count_eigenvalues,
    find_eigenvalues,
    operator_norm,
    sweep,
    threshold_alpha1,
)

__all__ = [
    "ConvergenceError",
    "InconsistencyError",
    "HardyKernelSpectrum",
    "TridiagonalWindow",
    "TruncatedKernel",
    "SpectrumReport",
    "RktReport",
    "apply_factorized",
    "build_expansion",
    "count_eigenvalues",
    "f_sequence",
    "f_taylor",
    "find_eigenvalues",
    "integral_form",
    "inverse_residual",
    "jacobi_matvec",
    "jacobi_params",
    "kernel_entry",
    "kernel_matrix",
    "kernel_ratio",
    "lorentz_integrate",
    "omega",
    "operator_norm",
    "quadratic_form",
    "rkt_decision",
    "rkt_supremum",
    "secular",
    "solve_generalized",
    "sturm_count",
    "sweep",
    "threshold_alpha1",
    "truncated_top_eigs",
    "zeta",
]
