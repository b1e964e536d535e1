"""Univariate and Laurent polynomials in ``x`` with rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Coeff = Union[int, Fraction]


class NotDivisible(ArithmeticError):
    """Raised when an exact division by a power of ``x`` is impossible."""


class _Infinity:
    """Valuation of the zero polynomial.

    Compares greater than every integer but refuses arithmetic, so an
    infinite valuation can never leak into an integer computation.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    __str__ = __repr__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("dfsurf.INF")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def _no_arithmetic(self, *args):
        raise TypeError("arithmetic on the infinite valuation is undefined")

    __add__ = __radd__ = __sub__ = __rsub__ = __mul__ = __rmul__ = _no_arithmetic
    __neg__ = __int__ = __index__ = _no_arithmetic


INF = _Infinity()


def _strip(coeffs: Iterable[Coeff]) -> tuple:
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def format_coefficient_term(coeff: Fraction, monomial: str, first: bool) -> str:
    """Render ``coeff*monomial`` as a signed term of a sum."""
    sign = "-" if coeff < 0 else "+"
    mag = -coeff if coeff < 0 else coeff
    if monomial == "":
        body = str(mag)
    elif mag == 1:
        body = monomial
    else:
        body = f"{mag}*{monomial}"
    if first:
        return f"-{body}" if sign == "-" else body
    return f" {sign} {body}"


def _x_power(k: int) -> str:
    if k == 0:
        return ""
    if k == 1:
        return "x"
    return f"x^{k}"


class Poly:
    """Dense polynomial in ``x`` over Q; ``coeffs[k]`` is the coefficient of ``x^k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Coeff] = ()):
        object.__setattr__(self, "coeffs", _strip(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def constant(cls, c: Coeff) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c: Coeff = 1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, value):
        acc = Fraction(0) if isinstance(value, (int, Fraction)) else 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def shift(self, k: int) -> "Poly":
        """Multiply by ``x^k`` (``k >= 0``)."""
        if k < 0:
            raise ValueError("use div_exact_by_x_pow for negative shifts")
        if not self.coeffs:
            return self
        return Poly([0] * k + list(self.coeffs))

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return self.to_text()

    def to_text(self, var: str = "x") -> str:
        """Ascending-order text, e.g. ``2 + x - 1/2*x^3``."""
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = _x_power(k).replace("x", var) if k else ""
            parts.append(format_coefficient_term(c, mono, first=not parts))
        return "".join(parts)


def _as_poly(value):
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)):
        return Poly.constant(value)
    return None


def ord_at_x(p: Poly):
    """x-adic valuation of ``p``; :data:`INF` for the zero polynomial."""
    for k, c in enumerate(p.coeffs):
        if c != 0:
            return k
    return INF


def trunc_mod(p: Poly, m: int) -> Poly:
    """Representative of ``p`` modulo ``x^m`` of degree ``< m``."""
    if m < 0:
        raise ValueError("truncation order must be nonnegative")
    return Poly(p.coeffs[:m])


def div_exact_by_x_pow(p: Poly, m: int) -> Poly:
    """Return ``q`` with ``q * x^m == p``."""
    if m < 0:
        raise ValueError("exponent must be nonnegative")
    v = ord_at_x(p)
    if v is INF:
        return Poly()
    if v < m:
        raise NotDivisible(f"{p} is not divisible by x^{m} (valuation {v})")
    return Poly(p.coeffs[m:])


def congruent_mod_x_pow(p: Poly, q: Poly, m: int) -> bool:
    return ord_at_x(p - q) >= m


class LaurentPoly:
    """Polynomial in ``x`` and ``x^-1``: ``sum coeffs[k] * x^(min_exp + k)``."""

    __slots__ = ("min_exp", "coeffs")

    def __init__(self, min_exp: int = 0, coeffs: Sequence[Coeff] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        cs = cs[lead:]
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "min_exp", min_exp + lead if cs else 0)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def from_poly(cls, p: Poly, shift: int = 0) -> "LaurentPoly":
        """``x^shift * p``."""
        return cls(shift, p.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def min_exponent(self):
        return INF if not self.coeffs else self.min_exp

    @property
    def max_exponent(self):
        return None if not self.coeffs else self.min_exp + len(self.coeffs) - 1

    def coeff(self, k: int) -> Fraction:
        i = k - self.min_exp
        if self.coeffs and 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def terms(self):
        return {self.min_exp + i: c for i, c in enumerate(self.coeffs) if c != 0}

    def __eq__(self, other):
        if isinstance(other, Poly):
            other = LaurentPoly.from_poly(other)
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly(0, [other])
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.min_exp == other.min_exp and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("LaurentPoly", self.min_exp, self.coeffs))

    def __neg__(self):
        return LaurentPoly(self.min_exp, [-c for c in self.coeffs])

    def __add__(self, other):
        other = _as_laurent(other)
        if other is None:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.min_exp, other.min_exp)
        hi = max(self.max_exponent, other.max_exponent)
        return LaurentPoly(lo, [self.coeff(k) + other.coeff(k) for k in range(lo, hi + 1)])

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_laurent(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_laurent(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _as_laurent(other)
        if other is None:
            return NotImplemented
        prod = Poly(self.coeffs) * Poly(other.coeffs)
        return LaurentPoly(self.min_exp + other.min_exp, prod.coeffs)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``x^k``; ``k`` may be negative."""
        return LaurentPoly(self.min_exp + k, self.coeffs)

    def to_poly(self) -> Poly:
        if self.is_zero():
            return Poly()
        if self.min_exp < 0:
            raise NotDivisible(f"{self} has a pole at x = 0")
        return Poly.monomial(self.min_exp, 1) * Poly(self.coeffs)

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in sorted(self.terms().items()):
            parts.append(format_coefficient_term(c, _x_power(k), first=not parts))
        return "".join(parts)


def _as_laurent(value):
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, Poly):
        return LaurentPoly.from_poly(value)
    if isinstance(value, (int, Fraction)):
        return LaurentPoly(0, [value])
    return None
