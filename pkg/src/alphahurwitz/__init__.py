"""Complex continued fractions for the alpha-Hurwitz family and their finite partitions."""
from __future__ import annotations

from .cf_core import Alpha, CFExpansion, DomainError, convergents, evaluate_cf, expand, in_domain_D
from .exact_arith import GaussianInt, GaussianRational, gi_norm
from .gencircle import GenCircle, translate, reciprocal
from .real_cf import best_approx_check, gauss_expand, nearest_int_expand

__version__ = "0.1.0"

__all__ = [
    "Alpha",
    "CFExpansion",
    "DomainError",
    "GaussianInt",
    "GaussianRational",
    "GenCircle",
    "best_approx_check",
    "convergents",
    "evaluate_cf",
    "expand",
    "gauss_expand",
    "gi_norm",
    "in_domain_D",
    "nearest_int_expand",
    "reciprocal",
    "translate",
]
