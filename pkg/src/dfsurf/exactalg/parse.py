"""Reader for the polynomial text syntax, e.g. ``1 + 2*x - x^2`` or ``3/2*y*(y-1)``.

Precedence: ``^`` over unary sign over ``*`` over binary ``+``/``-``.
Rational literals ``a/b`` are single tokens; there is no general division.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .multipoly import MultiPoly
from .poly import Poly

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


class PolySyntaxError(ValueError):
    def __init__(self, text: str, pos: int, message: str):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        number, name, op = m.groups()
        start = m.start(m.lastindex)
        if number is not None:
            tokens.append(("num", number, start))
        elif name is not None:
            tokens.append(("var", name, start))
        elif op in "+-*^()":
            tokens.append(("op", op, start))
        else:
            raise PolySyntaxError(text, start, f"unexpected character {op!r}")
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value or kind != "op":
            raise PolySyntaxError(self.text, pos, f"expected {value!r}")

    def parse(self) -> MultiPoly:
        if self.peek()[0] == "end":
            raise PolySyntaxError(self.text, 0, "empty polynomial")
        result = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise PolySyntaxError(self.text, pos, f"unexpected {val!r}")
        return result

    def expr(self) -> MultiPoly:
        acc = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> MultiPoly:
        acc = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            acc = acc * self.unary()
        return acc

    def unary(self) -> MultiPoly:
        kind, val, _ = self.peek()
        if kind == "op" and val in ("+", "-"):
            self.take()
            inner = self.unary()
            return -inner if val == "-" else inner
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or "/" in val:
                raise PolySyntaxError(self.text, pos, "exponent must be a nonnegative integer")
            return base ** int(val)
        return base

    def atom(self) -> MultiPoly:
        kind, val, pos = self.take()
        if kind == "num":
            num, _, den = val.partition("/")
            if den and int(den) == 0:
                raise PolySyntaxError(self.text, pos, "zero denominator")
            return MultiPoly.constant(Fraction(int(num), int(den) if den else 1))
        if kind == "var":
            return MultiPoly.var(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise PolySyntaxError(self.text, pos, f"unexpected {val!r}" if val else "unexpected end")


def parse_multipoly(text: str, variables: Optional[Sequence[str]] = None) -> MultiPoly:
    """Parse polynomial text; variables appear in order of first use unless given."""
    p = _Parser(text).parse()
    if variables is not None:
        return p.with_variables(variables)
    used = p.used_variables()
    return p.with_variables(used)


def parse_poly(text: str, var: str = "x") -> Poly:
    """Parse a univariate polynomial in ``var``."""
    p = _Parser(text).parse()
    try:
        return p.to_poly(var)
    except ValueError as exc:
        raise PolySyntaxError(text, 0, str(exc)) from None


def parse_rational(text: str) -> Fraction:
    """Parse a signed integer or ``a/b`` literal."""
    m = re.fullmatch(r"\s*([+-]?)(\d+)(?:/(\d+))?\s*", text)
    if m is None:
        raise PolySyntaxError(text, 0, "expected a rational number")
    sign, num, den = m.groups()
    if den is not None and int(den) == 0:
        raise PolySyntaxError(text, 0, "zero denominator")
    value = Fraction(int(num), int(den) if den else 1)
    return -value if sign == "-" else value
