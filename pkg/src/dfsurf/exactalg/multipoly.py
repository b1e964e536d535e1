"""Sparse multivariate polynomials and unreduced rational functions over Q."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .poly import NotDivisible, Poly, format_coefficient_term

Exponents = Tuple[int, ...]


class UnboundVariable(KeyError):
    """A substitution left a variable of the polynomial without a value."""


class MultiPoly:
    """Polynomial in an explicit, ordered list of named variables.

    ``terms`` maps exponent vectors (aligned with ``variables``) to nonzero
    coefficients.  Binary operations extend the variable list of the left
    operand with any new variables of the right one.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str] = (), terms: Mapping[Exponents, object] = ()):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"repeated variable in {variables}")
        clean: Dict[Exponents, Fraction] = {}
        for exps, c in dict(terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(variables):
                raise ValueError("exponent vector length does not match variables")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent in a polynomial")
            c = Fraction(c)
            if c != 0:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if clean[exps] == 0:
                    del clean[exps]
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # construction helpers

    @classmethod
    def constant(cls, c, variables: Sequence[str] = ()) -> "MultiPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str, variables: Sequence[str] = ()) -> "MultiPoly":
        variables = tuple(variables) or (name,)
        if name not in variables:
            variables = variables + (name,)
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exps: 1})

    @classmethod
    def from_poly(cls, p: Poly, var: str = "x") -> "MultiPoly":
        return cls((var,), {(k,): c for k, c in enumerate(p.coeffs)})

    # structure

    def is_zero(self) -> bool:
        return not self.terms

    def with_variables(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express over ``variables``, which must contain every used variable."""
        variables = tuple(variables)
        index = {v: i for i, v in enumerate(variables)}
        out = {}
        for exps, c in self.terms.items():
            new = [0] * len(variables)
            for v, e in zip(self.variables, exps):
                if e == 0:
                    continue
                if v not in index:
                    raise ValueError(f"variable {v!r} missing from {variables}")
                new[index[v]] = e
            out[tuple(new)] = c
        return MultiPoly(variables, out)

    def used_variables(self) -> Tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.variables)
                     if any(exps[i] for exps in self.terms))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: str) -> int:
        if var not in self.variables:
            return 0 if self.terms else -1
        i = self.variables.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def rename(self, mapping: Mapping[str, str]) -> "MultiPoly":
        return MultiPoly([mapping.get(v, v) for v in self.variables], self.terms)

    def to_poly(self, var: str = "x") -> Poly:
        """Convert to a univariate :class:`Poly` in ``var``."""
        extra = [v for v in self.used_variables() if v != var]
        if extra:
            raise ValueError(f"expected a polynomial in {var} only, found {extra}")
        if var not in self.variables:
            return Poly([self.terms.get((0,) * len(self.variables), 0)])
        i = self.variables.index(var)
        coeffs = [Fraction(0)] * (self.degree_in(var) + 1)
        for exps, c in self.terms.items():
            coeffs[exps[i]] += c
        return Poly(coeffs)

    def div_exact_by_var_pow(self, var: str, m: int) -> "MultiPoly":
        """Return ``q`` with ``q * var^m == self``."""
        if m == 0 or not self.terms:
            return self
        if var not in self.variables:
            raise NotDivisible(f"{self} is not divisible by {var}^{m}")
        i = self.variables.index(var)
        out = {}
        for exps, c in self.terms.items():
            if exps[i] < m:
                raise NotDivisible(f"{self} is not divisible by {var}^{m}")
            e = list(exps)
            e[i] -= m
            out[tuple(e)] = c
        return MultiPoly(self.variables, out)

    # arithmetic

    def _aligned(self, other: "MultiPoly"):
        if other.variables == self.variables:
            return self, other
        variables = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return self.with_variables(variables), other.with_variables(variables)

    def __eq__(self, other):
        other = _as_multi(other)
        if other is None:
            return NotImplemented
        a, b = self._aligned(other)
        return a.terms == b.terms

    def __hash__(self):
        used = self.used_variables()
        return hash(frozenset(self.with_variables(sorted(used)).terms.items()))

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        other = _as_multi(other)
        if other is None:
            return NotImplemented
        a, b = self._aligned(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MultiPoly(a.variables, out)

    def __radd__(self, other):
        other = _as_multi(other)
        if other is None:
            return NotImplemented
        return other + self

    def __sub__(self, other):
        other = _as_multi(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_multi(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _as_multi(other)
        if other is None:
            return NotImplemented
        a, b = self._aligned(other)
        out: Dict[Exponents, Fraction] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(a.variables, out)

    def __rmul__(self, other):
        other = _as_multi(other)
        if other is None:
            return NotImplemented
        return other * self

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # printing

    def sorted_terms(self):
        """Terms in graded lexicographic order, largest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            factors = []
            for v, e in zip(self.variables, exps):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            parts.append(format_coefficient_term(c, "*".join(factors), first=not parts))
        return "".join(parts)

    __str__ = to_text

    def __repr__(self):
        return f"MultiPoly({self.variables}, {self.to_text()!r})"


def _as_multi(value):
    if isinstance(value, MultiPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return MultiPoly.constant(value)
    if isinstance(value, Poly):
        return MultiPoly.from_poly(value)
    return None


class RatFunc:
    """Quotient of two :class:`MultiPoly`; never reduced to lowest terms."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num, den = _as_multi(num), _as_multi(den)
        if num is None or den is None:
            raise TypeError("RatFunc needs polynomial numerator and denominator")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    __hash__ = None

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __add__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc(self.den ** (-n), self.num ** (-n))
        return RatFunc(self.num ** n, self.den ** n)

    def to_text(self) -> str:
        if self.den == 1:
            return self.num.to_text()
        return f"({self.num.to_text()})/({self.den.to_text()})"

    __str__ = to_text

    def __repr__(self):
        return f"RatFunc({self.to_text()!r})"


def _as_ratfunc(value):
    if isinstance(value, RatFunc):
        return value
    multi = _as_multi(value)
    return None if multi is None else RatFunc(multi)


def substitute(p: MultiPoly, bindings: Mapping[str, object]) -> RatFunc:
    """Exact substitution of rational functions for the variables of ``p``.

    Works over the common denominator ``prod d_v^E_v`` (``E_v`` the degree of
    ``p`` in ``v``) so the result is built with a single division.
    """
    bound: Dict[str, RatFunc] = {}
    for v in p.used_variables():
        if v not in bindings:
            raise UnboundVariable(v)
        bound[v] = _as_ratfunc(bindings[v])
    max_exp = {v: p.degree_in(v) for v in bound}

    num_pows: Dict[Tuple[str, int], MultiPoly] = {}
    den_pows: Dict[Tuple[str, int], MultiPoly] = {}

    def power(cache, v, base, e):
        key = (v, e)
        if key not in cache:
            cache[key] = base ** e
        return cache[key]

    numerator = MultiPoly.constant(0)
    for exps, c in p.terms.items():
        term = MultiPoly.constant(c)
        for v, e in zip(p.variables, exps):
            if v not in bound:
                continue
            rf = bound[v]
            if e:
                term = term * power(num_pows, v, rf.num, e)
            if max_exp[v] - e:
                term = term * power(den_pows, v, rf.den, max_exp[v] - e)
        numerator = numerator + term
    denominator = MultiPoly.constant(1)
    for v, rf in bound.items():
        denominator = denominator * power(den_pows, v, rf.den, max_exp[v])
    return RatFunc(numerator, denominator)


def ratfunc_is_zero(f: RatFunc) -> bool:
    """True iff the fully expanded numerator of ``f`` vanishes."""
    return f.num.is_zero()


def product(factors: Iterable) -> MultiPoly:
    acc = MultiPoly.constant(1)
    for f in factors:
        acc = acc * f
    return acc
