"""Gluing data, predicates and explicit equations of the surface S(gamma).

S(gamma) is covered by charts ``Spec Q[x][T_i]``, one per leaf, glued over
``x != 0`` by ``T_i = g_ij + x^(m_j - m_i) T_j`` with transition functions
``g_ij = x^(-m_i) (sigma_j - sigma_i)``.  The canonical morphism to the
affine line over ``Q[x]`` is ``y = sigma_i + x^(m_i) T_i`` in chart ``i``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .exactalg import (
    LaurentPoly,
    MultiPoly,
    Poly,
    RatFunc,
    div_exact_by_x_pow,
    product,
    ratfunc_is_zero,
    substitute,
)
from .labelled import (
    InvalidLabelledTree,
    InvalidMorphism,
    LabelledTree,
    TreeMorphism,
    essentialize,
    validate,
    validate_morphism,
)
from .trees import RootedTree


class NotABroom(ValueError):
    pass


class InvalidSpec(ValueError):
    pass


def _require_valid(gamma: LabelledTree):
    problems = validate(gamma)
    if problems:
        raise InvalidLabelledTree(problems)


@dataclass(frozen=True)
class SurfaceDescriptor:
    leaves: Tuple[str, ...]
    h: int
    mu: Tuple[int, ...]
    sigma: Tuple[Poly, ...]
    transition: Tuple[Tuple[Optional[LaurentPoly], ...], ...]

    @property
    def n(self) -> int:
        return len(self.mu)

    @property
    def m(self) -> Tuple[int, ...]:
        return tuple(self.h - mu for mu in self.mu)


def descriptor(gamma: LabelledTree) -> SurfaceDescriptor:
    _require_valid(gamma)
    shape = gamma.shape
    leaves = tuple(shape.leaves())
    m = [shape.level(e) for e in leaves]
    h = shape.height()
    sigma = tuple(gamma.sigma[e] for e in leaves)
    n = len(leaves)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(None)
            else:
                row.append(LaurentPoly.from_poly(sigma[j] - sigma[i], -m[i]))
        rows.append(tuple(row))
    return SurfaceDescriptor(leaves, h, tuple(h - mi for mi in m), sigma, tuple(rows))


def is_affine(d: SurfaceDescriptor) -> bool:
    """Every transition function has a pole at ``x = 0`` (vacuous for one chart)."""
    if d.n == 1:
        return True
    for i in range(d.n):
        for j in range(d.n):
            if i != j:
                g = d.transition[i][j]
                if g is None or g.is_zero() or g.min_exponent >= 0:
                    return False
    return True


def canonical_morphism_data(gamma: LabelledTree):
    """``(h, mu, sigma)`` with leaves in depth-first order."""
    d = descriptor(gamma)
    return d.h, d.mu, d.sigma


def chart_morphism(gamma: LabelledTree, leaf: str, chart_var: str = "T") -> MultiPoly:
    """``sigma_leaf + x^(m_leaf) T`` as a polynomial in ``x`` and ``T``."""
    m = gamma.shape.level(leaf)
    x = MultiPoly.var("x", ("x", chart_var))
    t = MultiPoly.var(chart_var, ("x", chart_var))
    return MultiPoly.from_poly(gamma.sigma[leaf]) + x ** m * t


def chart_consistency(gamma: LabelledTree) -> bool:
    """Check ``y_i = y_j`` on every overlap after the chart change.

    With ``T_i = g_ij + x^(m_j - m_i) T_j`` and ``y_i = sigma_i + x^(m_i) T_i``
    the difference ``y_i - y_j`` must vanish as a rational function of
    ``x`` and ``T_j``.
    """
    d = descriptor(gamma)
    variables = ("x", "T")
    x = MultiPoly.var("x", variables)
    tj = RatFunc(MultiPoly.var("T", variables))
    for i, ei in enumerate(d.leaves):
        for j, ej in enumerate(d.leaves):
            if i == j:
                continue
            g = d.transition[i][j]
            g_rf = _laurent_to_ratfunc(g, variables)
            shift = d.m[j] - d.m[i]
            ti = g_rf + tj * _x_pow(shift, variables)
            yi = chart_morphism(gamma, ei, "Ti")
            yj = chart_morphism(gamma, ej, "T")
            lhs = substitute(yi, {"x": x, "Ti": ti})
            rhs = substitute(yj, {"x": x, "T": tj.num})
            if not ratfunc_is_zero(lhs - rhs):
                return False
    return True


def _x_pow(k: int, variables) -> RatFunc:
    x = MultiPoly.var("x", variables)
    return RatFunc(x ** k) if k >= 0 else RatFunc(1, x ** (-k))


def _laurent_to_ratfunc(g: LaurentPoly, variables) -> RatFunc:
    if g.is_zero():
        return RatFunc(MultiPoly.constant(0, variables))
    body = MultiPoly.from_poly(Poly(g.coeffs)).with_variables(variables)
    return RatFunc(body) * _x_pow(g.min_exp, variables)


@dataclass(frozen=True)
class MorphismGluingData:
    leaf_map: Dict[str, str]
    nu: Tuple[int, ...]
    sigma2: Tuple[Poly, ...]
    source_leaves: Tuple[str, ...]


def morphism_gluing_data(phi: TreeMorphism) -> MorphismGluingData:
    """Leaf map, ``nu_i = mu_{j(i)}`` and ``sigma''_i = (sigma'_i - sigma_{j(i)}) / x^{m_{j(i)}}``."""
    problems = validate_morphism(phi)
    if problems:
        raise InvalidMorphism(problems)
    tgt = phi.target.shape
    h = tgt.height()
    src_leaves = tuple(phi.source.shape.leaves())
    leaf_map = {e: phi.node_map[e] for e in src_leaves}
    nu = tuple(h - tgt.level(leaf_map[e]) for e in src_leaves)
    sigma2 = tuple(div_exact_by_x_pow(phi.source.sigma[e] - phi.target.sigma[leaf_map[e]],
                                      tgt.level(leaf_map[e]))
                   for e in src_leaves)
    return MorphismGluingData(leaf_map, nu, sigma2, src_leaves)


def canonical_sheaf_trivial(gamma: LabelledTree) -> bool:
    """All leaves of the essential tree at one level (also: a free G_a-action exists)."""
    _require_valid(gamma)
    es = essentialize(gamma).tree.shape
    return len({es.level(e) for e in es.leaves()}) == 1


admits_free_ga_action = canonical_sheaf_trivial


def ml_trivial(gamma: LabelledTree) -> bool:
    """Makar-Limanov invariant trivial iff the essential tree is a comb."""
    _require_valid(gamma)
    return essentialize(gamma).tree.shape.is_comb()


def ods_characterization(gamma: LabelledTree) -> bool:
    """Essential tree is a comb of height at most one, i.e. ``S = {xz = P(y)}``."""
    _require_valid(gamma)
    es = essentialize(gamma).tree.shape
    return es.is_comb() and es.height() <= 1


def fiber_components(gamma: LabelledTree) -> List[Tuple[str, Fraction]]:
    """One fiber component per leaf with the value of ``y`` on it at ``x = 0``."""
    _require_valid(gamma)
    return [(e, gamma.sigma[e].coeff(0)) for e in gamma.shape.leaves()]


# ---------------------------------------------------------------------------
# equations


@dataclass(frozen=True)
class EquationSystem:
    variables: Tuple[str, ...]
    relations: Tuple[MultiPoly, ...]
    chart_substitutions: Mapping[str, RatFunc]
    charts: Mapping[str, Mapping[str, RatFunc]] = field(default_factory=dict)
    morphism: Optional[MultiPoly] = None

    def verify(self) -> bool:
        """Every relation vanishes under the generic and all chart substitutions."""
        maps = [self.chart_substitutions] + list(self.charts.values())
        return all(ratfunc_is_zero(substitute(r, sub)) for r in self.relations for sub in maps)

    def renamed(self, mapping: Mapping[str, str]) -> "EquationSystem":
        def rn(rf: RatFunc) -> RatFunc:
            return RatFunc(rf.num.rename(mapping), rf.den.rename(mapping))

        return EquationSystem(
            tuple(mapping.get(v, v) for v in self.variables),
            tuple(r.rename(mapping) for r in self.relations),
            {mapping.get(k, k): rn(v) for k, v in self.chart_substitutions.items()},
            {name: {mapping.get(k, k): rn(v) for k, v in sub.items()}
             for name, sub in self.charts.items()},
            None if self.morphism is None else self.morphism.rename(mapping),
        )

    def to_json_dict(self) -> dict:
        charts = {"generic": {k: v.to_text() for k, v in self.chart_substitutions.items()}}
        for name, sub in self.charts.items():
            charts[name] = {k: v.to_text() for k, v in sub.items()}
        out = {
            "variables": list(self.variables),
            "relations": [r.with_variables(self._all_vars(r)).to_text() for r in self.relations],
            "charts": charts,
        }
        if self.morphism is not None:
            out["morphism"] = self.morphism.to_text()
        return out

    def _all_vars(self, r: MultiPoly):
        return tuple(self.variables) + tuple(v for v in r.variables if v not in self.variables)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def broom_data(gamma: LabelledTree):
    """``(r, m, b, leaves, es_sigma)`` when ``gamma`` is a broom of ``n`` chains of length ``m``.

    A chain of length ``L >= 1`` is read as one chain with ``r = 0, m = L``.
    """
    shape = gamma.shape
    if shape.is_chain():
        (leaf,) = shape.leaves()
        length = shape.level(leaf)
        if length < 1:
            raise NotABroom("a one-node tree is not a broom")
        return 0, length, Poly(), [leaf], [gamma.sigma[leaf]]
    es = essentialize(gamma)
    s = es.tree.shape
    levels = {s.level(e) for e in s.leaves()}
    if len(levels) != 1:
        raise NotABroom("leaves of the essential tree are not all at one level")
    if any(len(s.children[u]) > 1 for u in s.nodes if u != s.root):
        raise NotABroom("the essential tree branches below its root")
    (m,) = levels
    return es.m, m, es.c, s.leaves(), [es.tree.sigma[e] for e in s.leaves()]


def emit_broom_equations(gamma: LabelledTree) -> EquationSystem:
    """``x^m z - P(y)`` with ``P = prod (y - es_sigma_i)`` plus charts and canonical morphism."""
    _require_valid(gamma)
    r, m, b, leaves, roots = broom_data(gamma)
    variables = ("x", "y", "z")
    x = MultiPoly.var("x", variables)
    y = MultiPoly.var("y", variables)
    z = MultiPoly.var("z", variables)

    def lift(p: Poly) -> MultiPoly:
        return MultiPoly.from_poly(p).with_variables(variables)

    P = product([y - lift(s) for s in roots]).with_variables(variables)
    relation = x ** m * z - P
    generic = {"x": RatFunc(x), "y": RatFunc(y), "z": RatFunc(P, x ** m)}
    chart_vars = ("x", "T")
    xc = MultiPoly.var("x", chart_vars)
    tc = MultiPoly.var("T", chart_vars)
    charts = {}
    for leaf, s in zip(leaves, roots):
        yc = MultiPoly.from_poly(s).with_variables(chart_vars) + xc ** m * tc
        pc = substitute(P, {"x": xc, "y": yc}).num
        zc = pc.div_exact_by_var_pow("x", m)
        charts[f"chart[{leaf}]"] = {"x": RatFunc(xc), "y": RatFunc(yc), "z": RatFunc(zc)}
    morphism = x ** r * y + lift(b)
    return EquationSystem(variables, (relation,), generic, charts, morphism)


@dataclass(frozen=True)
class CombSpec:
    """Root lists of ``P_1 .. P_n``; ``distinguished[i]`` is a root of ``P_{i+1}``."""

    roots: Tuple[Tuple[Fraction, ...], ...]
    distinguished: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(tuple(Fraction(r) for r in rs) for rs in self.roots))
        object.__setattr__(self, "distinguished", tuple(Fraction(r) for r in self.distinguished))

    @property
    def n(self) -> int:
        return len(self.roots)


def comb_spec_problems(spec: CombSpec) -> List[str]:
    out = []
    if spec.n < 1:
        out.append("need at least one polynomial")
    if len(spec.distinguished) != spec.n:
        out.append("one distinguished root per polynomial is required")
        return out
    for i, (rs, lam) in enumerate(zip(spec.roots, spec.distinguished), start=1):
        if not rs:
            out.append(f"P_{i} has no roots")
        if len(set(rs)) != len(rs):
            out.append(f"P_{i} has a repeated root")
        if lam not in rs:
            out.append(f"distinguished root {lam} is not a root of P_{i}")
    return out


def comb_tree(spec: CombSpec) -> LabelledTree:
    """Comb whose level-``i`` branching follows the roots of ``P_{i+1}``.

    Non-distinguished roots of ``P_1 .. P_{n-1}`` and all roots of ``P_n``
    give leaves; labels are the partial sums ``sum_t lambda_{t+1} x^t``.
    """
    edges = []
    sigma = {}
    spine = "v0"
    prefix = Poly()
    for i, (rs, lam) in enumerate(zip(spec.roots, spec.distinguished)):
        last = i == spec.n - 1
        nxt = f"v{i + 1}"
        for k, root in enumerate(rs):
            if root == lam and not last:
                edges.append((spine, nxt))
                continue
            leaf = f"l{i + 1}_{k + 1}"
            edges.append((spine, leaf))
            sigma[leaf] = prefix + Poly.monomial(i, root)
        prefix = prefix + Poly.monomial(i, lam)
        spine = nxt
    return LabelledTree(RootedTree("v0", edges), sigma)


def emit_comb_equations(spec: CombSpec) -> Tuple[EquationSystem, LabelledTree]:
    problems = comb_spec_problems(spec)
    if problems:
        raise InvalidSpec("; ".join(problems))
    n = spec.n
    names = tuple(f"X{k}" for k in range(n + 2))
    X = [MultiPoly.var(v, names) for v in names]

    def P(i: int, var: MultiPoly) -> MultiPoly:
        return product([var - r for r in spec.roots[i - 1]]).with_variables(names)

    def R(i: int, var: MultiPoly) -> MultiPoly:
        lam = spec.distinguished[i - 1]
        return product([var - r for r in spec.roots[i - 1] if r != lam]).with_variables(names)

    def prod_R(lo: int, hi: int) -> MultiPoly:
        return product([R(i, X[i]) for i in range(lo, hi + 1)]).with_variables(names)

    relations = []
    for j in range(1, n + 1):
        relations.append(X[0] * X[j + 1] - prod_R(1, j - 1) * P(j, X[j]))
    for j in range(2, n + 1):
        for l in range(j, n + 1):
            lam = spec.distinguished[j - 2]
            relations.append((X[j - 1] - lam) * X[l + 1] - X[j] * prod_R(j, l - 1) * P(l, X[l]))

    chart_vars = ("x", "y")
    xv = MultiPoly.var("x", chart_vars)
    yv = MultiPoly.var("y", chart_vars)
    values: List[RatFunc] = [RatFunc(xv), RatFunc(yv)]
    for j in range(1, n + 1):
        bind = {names[k]: values[k] for k in range(j + 1)}
        numer = substitute(prod_R(1, j - 1) * P(j, X[j]), bind)
        values.append(numer / values[0])
    generic = {names[k]: values[k] for k in range(n + 2)}
    system = EquationSystem(names, tuple(r.with_variables(names) for r in relations), generic)
    return system, comb_tree(spec)
