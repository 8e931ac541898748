"""Numerical laboratory for the weighted composition semigroup W_n on H^2."""

from .hardy_core import (CoeffVector, Estimate, cumsum, inner_product, lin_comb, monomial, norm,
                         polynomial, shift, truncate)
from .semigroup import OperatorSpec, apply_iterate, apply_W, apply_W_star

__version__ = "0.1.0"

__all__ = [
    "CoeffVector",
    "Estimate",
    "OperatorSpec",
    "apply_W",
    "apply_W_star",
    "apply_iterate",
    "cumsum",
    "inner_product",
    "lin_comb",
    "monomial",
    "norm",
    "polynomial",
    "shift",
    "truncate",
]
