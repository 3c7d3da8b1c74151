"""Diophantine exponents of vectors and affine subspaces, computed three ways:
direct best-approximation search, diagonal-flow excursions, and exterior-algebra
sector exponents with closed-form formulas."""

from .scalars import RealScalar, parse_scalar, parse_vector, parse_matrix
from .search import sigma_estimate, omega_estimate, matrix_omega_estimate
from .flow import trace, estimate_gamma, gamma_to_sigma, sigma_to_gamma
from .exterior import Multivector, SubspaceSpec, wedge, act_u, sigma_j_estimate
from .formulas import ExtendedExponent, hyperplane_sigma, line_r3_sigma, sigma_L_from_sigmas

__version__ = "0.1.0"
