"""Exact quadratic Dirichlet L-functions over F_q[t] and their statistics."""

__version__ = "0.1.0"

from .fields import FieldCtx, field_make
from .ffpoly import (Factorization, PolyQ, enumerate_squarefree_monic,
                     factor_poly, is_squarefree, jacobi_symbol, moebius_mu,
                     poly_gcd, squarefree_count)
from .lfunc import (LPolynomial, ZeroSet, check_functional_equation, complete,
                    invert_series, lpoly_charsum, lpoly_pointcount,
                    point_count_curve, zero_angles)
from .symchar import (Partition, partition_conjugate, schur_poly, sp_character,
                      skew_multiplicity, stable_numerators, weyl_denominator)
from .stats import RatioSpec, theorem_constants

__all__ = [
    "FieldCtx", "field_make",
    "PolyQ", "Factorization", "poly_gcd", "is_squarefree", "factor_poly",
    "moebius_mu", "jacobi_symbol", "enumerate_squarefree_monic", "squarefree_count",
    "LPolynomial", "ZeroSet", "lpoly_charsum", "lpoly_pointcount", "complete",
    "check_functional_equation", "zero_angles", "invert_series", "point_count_curve",
    "Partition", "partition_conjugate", "schur_poly", "sp_character",
    "weyl_denominator", "skew_multiplicity", "stable_numerators",
    "RatioSpec", "theorem_constants",
]
