"""Exact moment theory for polynomials of type R_II.

The polynomials satisfy
    P_{n+1}(x) = (x - b_n) P_n(x) - (c_n x^2 + a_n x + lambda_n) P_{n-1}(x)
and the package computes their generalized moments and dual coefficients
as weighted lattice-path sums, cross-checks them against algebraic routes,
and evaluates the constant-coefficient closed forms numerically.
"""

from .algebra import Poly, PolyInX, TruncatedSeries, Variable, evaluate, series_invert
from .families import FamilySpec, SYMBOLIC, compute_P, compute_d, leading_coeff
from .functional import mu_nrs, tau_by_paths, tau_by_solve
from .kernels import BACKEND
from .paths import LatticePath, PathClass, path_sum

__version__ = "0.1.0"

__all__ = [
    "Poly", "PolyInX", "TruncatedSeries", "Variable", "evaluate", "series_invert",
    "FamilySpec", "SYMBOLIC", "compute_P", "compute_d", "leading_coeff",
    "mu_nrs", "tau_by_paths", "tau_by_solve", "BACKEND",
    "LatticePath", "PathClass", "path_sum",
]
