"""Regularised determinants of Dirichlet polyharmonic operators on an interval.

Modules: ``exactdet`` (closed form and exact identities), ``bounds`` (two-sided
bounds and asymptotics), ``bfk`` (perturbed operators through Cauchy
problems), ``oracle`` (independent eigenvalue checks) and ``cli``.
"""

__version__ = "0.1.0"

from .bfk import DeterminantZero, cauchy_block, det_perturbed, k_theta, perturbation_decay, picard_solve
from .bounds import (
    BoundReport,
    SeriesTarget,
    asymptotic_logdet,
    barnes_bounds,
    logdet_two_sided,
    lower_bound_neg_log_F,
    neg_log_F,
    series_partial_sum,
    upper_bound_neg_log_F,
)
from .exactdet import (
    OperatorSpec,
    binomial_matrix_det,
    factorial_toeplitz_det,
    log_abs_h_alpha,
    log_det_polyharmonic,
    log_factorial_ratio,
    navier_log_det,
    vandermonde_h_alpha,
)
from .oracle import EigenList, det_ratio_by_eigenvalues, eigen_shooting, exact_reference
from .types import LogDet, PolyPotential

__all__ = [
    "BoundReport",
    "DeterminantZero",
    "EigenList",
    "LogDet",
    "OperatorSpec",
    "PolyPotential",
    "SeriesTarget",
    "asymptotic_logdet",
    "barnes_bounds",
    "binomial_matrix_det",
    "cauchy_block",
    "det_perturbed",
    "det_ratio_by_eigenvalues",
    "eigen_shooting",
    "exact_reference",
    "factorial_toeplitz_det",
    "k_theta",
    "log_abs_h_alpha",
    "log_det_polyharmonic",
    "log_factorial_ratio",
    "logdet_two_sided",
    "lower_bound_neg_log_F",
    "navier_log_det",
    "neg_log_F",
    "perturbation_decay",
    "picard_solve",
    "series_partial_sum",
    "upper_bound_neg_log_F",
    "vandermonde_h_alpha",
]
