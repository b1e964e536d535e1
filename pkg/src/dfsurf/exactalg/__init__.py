"""Exact arithmetic over Q: polynomials in x, Laurent polynomials, multivariate
polynomials and rational functions."""
from fractions import Fraction

from .linsolve import RationalSystem, solve_linear
from .multipoly import MultiPoly, RatFunc, UnboundVariable, product, ratfunc_is_zero, substitute
from .parse import PolySyntaxError, parse_multipoly, parse_poly, parse_rational
from .poly import (
    INF,
    LaurentPoly,
    NotDivisible,
    Poly,
    congruent_mod_x_pow,
    div_exact_by_x_pow,
    ord_at_x,
    trunc_mod,
)

Rational = Fraction

__all__ = [
    "INF", "LaurentPoly", "MultiPoly", "NotDivisible", "Poly", "PolySyntaxError",
    "RatFunc", "Rational", "RationalSystem", "UnboundVariable", "congruent_mod_x_pow",
    "div_exact_by_x_pow", "ord_at_x", "parse_multipoly", "parse_poly", "parse_rational",
    "product", "ratfunc_is_zero", "solve_linear", "substitute", "trunc_mod",
]
