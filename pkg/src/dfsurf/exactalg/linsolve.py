"""Incremental Gauss-Jordan elimination over Q for small dense systems."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence


class RationalSystem:
    """Affine system ``A v = b`` kept in reduced row echelon form.

    Equations are added one at a time; :meth:`add` reports whether the
    system is still consistent, which lets a backtracking search prune early.
    """

    def __init__(self, nvars: int):
        self.nvars = nvars
        # pivot column -> row (coefficients, rhs); each row has 1 at its pivot
        # and 0 at every other pivot column
        self.rows: Dict[int, List[Fraction]] = {}
        self.consistent = True

    def copy(self) -> "RationalSystem":
        other = RationalSystem(self.nvars)
        other.rows = {k: list(r) for k, r in self.rows.items()}
        other.consistent = self.consistent
        return other

    def add(self, coeffs: Sequence, rhs) -> bool:
        if not self.consistent:
            return False
        row = [Fraction(c) for c in coeffs] + [Fraction(rhs)]
        if len(row) != self.nvars + 1:
            raise ValueError("equation has the wrong number of coefficients")
        for col, prow in self.rows.items():
            f = row[col]
            if f:
                row = [a - f * b for a, b in zip(row, prow)]
        pivot = next((k for k in range(self.nvars) if row[k] != 0), None)
        if pivot is None:
            if row[-1] != 0:
                self.consistent = False
            return self.consistent
        p = row[pivot]
        row = [a / p for a in row]
        for col, prow in self.rows.items():
            f = prow[pivot]
            if f:
                self.rows[col] = [a - f * b for a, b in zip(prow, row)]
        self.rows[pivot] = row
        return True

    def fixed_value(self, var: int) -> Optional[Fraction]:
        """Value of ``var`` if every solution agrees on it, else ``None``."""
        row = self.rows.get(var)
        if row is None:
            return None
        if any(row[k] for k in range(self.nvars) if k != var):
            return None
        return row[-1]

    def solve(self, nonzero: Optional[int] = None) -> Optional[List[Fraction]]:
        """One solution, or ``None`` if inconsistent.

        With ``nonzero`` set, the solution must have that coordinate nonzero;
        ``None`` is returned when the system forces it to vanish.
        """
        if not self.consistent:
            return None
        free = [k for k in range(self.nvars) if k not in self.rows]
        assignment = {k: Fraction(0) for k in free}
        if nonzero is not None:
            if nonzero in free:
                assignment[nonzero] = Fraction(1)
            else:
                row = self.rows[nonzero]
                if row[-1] == 0:
                    lever = next((k for k in free if row[k] != 0), None)
                    if lever is None:
                        return None
                    assignment[lever] = Fraction(1)
        values = [Fraction(0)] * self.nvars
        for k, v in assignment.items():
            values[k] = v
        for col, row in self.rows.items():
            values[col] = row[-1] - sum((row[k] * assignment[k] for k in free), Fraction(0))
        return values


def solve_linear(equations: Sequence[Sequence], rhs: Sequence, nvars: int) -> Optional[List[Fraction]]:
    """Solve a full system at once; ``None`` when inconsistent."""
    system = RationalSystem(nvars)
    for coeffs, b in zip(equations, rhs):
        if not system.add(coeffs, b):
            return None
    return system.solve()
