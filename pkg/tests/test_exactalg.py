from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from dfsurf.exactalg import (
    INF,
    LaurentPoly,
    MultiPoly,
    NotDivisible,
    Poly,
    PolySyntaxError,
    RatFunc,
    RationalSystem,
    congruent_mod_x_pow,
    div_exact_by_x_pow,
    ord_at_x,
    parse_multipoly,
    parse_poly,
    parse_rational,
    ratfunc_is_zero,
    solve_linear,
    substitute,
    trunc_mod,
)

from strategies import VARS, multipolys, polys, small

SX, SY, SZ = sympy.symbols("x y z")


def to_sympy(p: MultiPoly):
    syms = [sympy.Symbol(v) for v in p.variables]
    out = sympy.Integer(0)
    for exps, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, exps):
            term *= s ** e
        out += term
    return sympy.expand(out)


# -- univariate ----------------------------------------------------------


def test_poly_basics():
    p = Poly([1, 2, 0, Fraction(-1, 2)])
    assert p.degree == 3
    assert Poly().degree == -1
    assert p.coeff(1) == 2 and p.coeff(7) == 0
    assert p.to_text() == "1 + 2*x - 1/2*x^3"
    assert Poly().to_text() == "0"
    assert Poly([0, 0, 0]) == Poly()
    assert p(2) == 1 + 4 - 4
    assert Poly.x() ** 3 == Poly.monomial(3)


def test_ord_and_trunc():
    assert ord_at_x(Poly()) is INF
    assert ord_at_x(Poly([0, 0, 3, 1])) == 2
    assert trunc_mod(Poly([1, 2, 3, 4]), 2) == Poly([1, 2])
    assert div_exact_by_x_pow(Poly([0, 0, 3, 1]), 2) == Poly([3, 1])
    with pytest.raises(NotDivisible):
        div_exact_by_x_pow(Poly([0, 1]), 2)
    assert congruent_mod_x_pow(Poly([1, 2, 5]), Poly([1, 2, 7]), 2)
    assert not congruent_mod_x_pow(Poly([1, 2, 5]), Poly([1, 3]), 2)


def test_infinity_refuses_arithmetic():
    assert INF > 10 ** 9
    with pytest.raises(TypeError):
        INF + 1


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p
    assert p - p == Poly()


@given(polys, polys)
def test_ord_of_product(p, q):
    if p.is_zero() or q.is_zero():
        assert ord_at_x(p * q) is INF
    else:
        assert ord_at_x(p * q) == ord_at_x(p) + ord_at_x(q)


@given(polys, st.integers(0, 6))
def test_trunc_split(p, m):
    t = trunc_mod(p, m)
    assert t.degree < m
    rest = div_exact_by_x_pow(p - t, m)
    assert t + rest.shift(m) == p


@given(polys)
def test_poly_text_round_trip(p):
    assert parse_poly(p.to_text()) == p


def test_laurent():
    g = LaurentPoly.from_poly(Poly([-2]), -3)
    assert g.min_exponent == -3 and g.max_exponent == -3
    assert str(g) == "-2*x^-3"
    assert LaurentPoly().min_exponent is INF
    h = g * LaurentPoly.from_poly(Poly([0, 0, 0, 1]))
    assert h.to_poly() == Poly([-2])
    assert (g + g).coeff(-3) == -4


# -- parsing -------------------------------------------------------------


def test_parse_examples():
    assert parse_poly("1+2*x") == Poly([1, 2])
    assert parse_poly("-(x - 1)^2") == Poly([-1, 2, -1])
    assert parse_poly("3/4*x") == Poly([0, Fraction(3, 4)])
    with pytest.raises(PolySyntaxError):
        parse_poly("3/4 x")  # no implicit multiplication
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_multipoly("x^2*z - y^2 + 1").to_text() == "x^2*z - y^2 + 1"
    with pytest.raises(PolySyntaxError):
        parse_poly("1 + * x")
    with pytest.raises(PolySyntaxError):
        parse_poly("y + 1")


@given(multipolys())
def test_multipoly_text_round_trip(p):
    assert parse_multipoly(p.to_text(), VARS) == p


# -- multivariate and rational functions, checked against sympy ------------


@given(multipolys(), multipolys())
def test_multipoly_arithmetic_matches_sympy(p, q):
    assert to_sympy(p * q - q + p) == sympy.expand(to_sympy(p) * to_sympy(q) - to_sympy(q) + to_sympy(p))


@given(multipolys(max_terms=3, max_exp=2), multipolys(max_terms=2, max_exp=2),
       multipolys(max_terms=2, max_exp=2))
def test_ratfunc_is_zero_matches_sympy(p, a, b):
    # substitute y -> a / (b + 1 + x^2) and compare zero tests
    den = b + MultiPoly.constant(1, VARS) + MultiPoly.var("x", VARS) ** 2
    if den.is_zero():
        return
    bind = {"x": MultiPoly.var("x", VARS), "y": RatFunc(a, den), "z": MultiPoly.var("z", VARS)}
    g = substitute(p, bind)
    assert ratfunc_is_zero(g - g)
    expr = to_sympy(p).subs(SY, to_sympy(a) / to_sympy(den))
    assert ratfunc_is_zero(g) == (sympy.simplify(expr) == 0)


def test_ratfunc_identity():
    x = MultiPoly.var("x", ("x", "y"))
    y = MultiPoly.var("y", ("x", "y"))
    f = RatFunc(y ** 2 - 1, x) - RatFunc(y - 1, x) * RatFunc(y + 1, 1)
    assert ratfunc_is_zero(f)
    assert RatFunc(x * y, x * x) == RatFunc(y, x)


def test_div_exact_by_var_pow():
    p = parse_multipoly("x^2*y + x^3", ("x", "y"))
    assert p.div_exact_by_var_pow("x", 2) == parse_multipoly("y + x", ("x", "y"))
    with pytest.raises(NotDivisible):
        p.div_exact_by_var_pow("x", 3)


# -- linear systems --------------------------------------------------------


def test_rational_system_incremental():
    s = RationalSystem(2)
    assert s.add([1, 1], 3)
    assert s.fixed_value(0) is None
    assert s.add([1, -1], 1)
    assert s.fixed_value(0) == 2 and s.fixed_value(1) == 1
    t = s.copy()
    assert not t.add([1, 0], 5)
    assert s.solve() == [2, 1]


def test_solve_prefers_nonzero():
    s = RationalSystem(2)
    s.add([0, 1], 4)
    sol = s.solve(nonzero=0)
    assert sol[0] != 0 and sol[1] == 4
    z = RationalSystem(1)
    z.add([1], 0)
    assert z.solve(nonzero=0) is None


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4),
       st.lists(small, min_size=3, max_size=3))
def test_solve_linear_against_known_solution(rows, x0):
    rhs = [sum(a * b for a, b in zip(r, x0)) for r in rows]
    sol = solve_linear(rows, rhs, 3)
    assert sol is not None
    assert [sum(a * b for a, b in zip(r, sol)) for r in rows] == rhs
