"""Boundary of the canonical completion, via blow-up bookkeeping on SNC curve graphs.

Start from a P^1-bundle over P^1 with the fiber ``F_0`` over ``x = 0``, the
fiber ``F_inf`` at infinity and a section ``C`` at infinity meeting both.
Every internal node of the (essential) tree gets its children by blowing up
one free point per child on the node's curve; the curves created for the
leaves are the closures of the fiber components and are not boundary.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .labelled import LabelledTree, essentialize

F_INF = "F_inf"
SECTION = "C"
F_ZERO = "F_0"


class InvalidCenter(ValueError):
    pass


@dataclass(frozen=True)
class Curve:
    name: str
    self_intersection: int
    is_boundary: bool = True
    initial: int = 0
    blowups: int = 0


@dataclass(frozen=True)
class CurveConfig:
    curves: Tuple[Curve, ...]
    edges: FrozenSet[FrozenSet[str]]

    def names(self) -> List[str]:
        return [c.name for c in self.curves]

    def curve(self, name: str) -> Curve:
        for c in self.curves:
            if c.name == name:
                return c
        raise KeyError(name)

    def self_intersections(self) -> Dict[str, int]:
        return {c.name: c.self_intersection for c in self.curves}

    def adjacent(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.edges

    def neighbours(self, name: str) -> List[str]:
        return [c.name for c in self.curves if c.name != name and self.adjacent(name, c.name)]

    def adjacency_matrix(self) -> List[List[int]]:
        names = self.names()
        return [[1 if a != b and self.adjacent(a, b) else 0 for b in names] for a in names]

    def restrict(self, names: Sequence[str]) -> "CurveConfig":
        keep = set(names)
        curves = tuple(c for c in self.curves if c.name in keep)
        return CurveConfig(curves, frozenset(e for e in self.edges if e <= keep))

    def boundary(self) -> "CurveConfig":
        return self.restrict([c.name for c in self.curves if c.is_boundary])

    def reordered(self, names: Sequence[str]) -> "CurveConfig":
        by_name = {c.name: c for c in self.curves}
        if sorted(names) != sorted(by_name):
            raise ValueError("reordering must list every curve once")
        return CurveConfig(tuple(by_name[n] for n in names), self.edges)

    def same_as(self, other: "CurveConfig") -> bool:
        """Equal curves, self-intersections, boundary flags and intersections."""
        return (self.self_intersections() == other.self_intersections()
                and {c.name: c.is_boundary for c in self.curves}
                == {c.name: c.is_boundary for c in other.curves}
                and self.edges == other.edges)


@dataclass(frozen=True)
class BlowUpStep:
    centers: Tuple[str, ...]
    name: Optional[str] = None


def initial_configuration() -> CurveConfig:
    curves = (Curve(F_INF, 0), Curve(SECTION, 0), Curve(F_ZERO, 0))
    edges = frozenset({frozenset((F_INF, SECTION)), frozenset((SECTION, F_ZERO))})
    return CurveConfig(curves, edges)


def blow_up_point(cfg: CurveConfig, step: BlowUpStep) -> Tuple[CurveConfig, str]:
    """Blow up a free point of one curve or the intersection point of two."""
    names = cfg.names()
    centers = tuple(step.centers)
    if len(centers) not in (1, 2) or len(set(centers)) != len(centers):
        raise InvalidCenter(f"a center is one curve or two distinct curves, got {centers}")
    for c in centers:
        if c not in names:
            raise InvalidCenter(f"unknown curve {c!r}")
    if len(centers) == 2 and not cfg.adjacent(*centers):
        raise InvalidCenter(f"{centers[0]!r} and {centers[1]!r} do not meet")
    new = step.name
    if new is None:
        k = len(names)
        while f"E{k}" in names:
            k += 1
        new = f"E{k}"
    if new in names:
        raise InvalidCenter(f"curve name {new!r} already used")
    curves = tuple(replace(c, self_intersection=c.self_intersection - 1, blowups=c.blowups + 1)
                   if c.name in centers else c for c in cfg.curves)
    curves = curves + (Curve(new, -1, True, -1, 0),)
    edges = set(cfg.edges)
    if len(centers) == 2:
        edges.discard(frozenset(centers))
    for c in centers:
        edges.add(frozenset((c, new)))
    return CurveConfig(curves, frozenset(edges)), new


def node_curve(node: str) -> str:
    return f"E_{node}"


def leaf_curve(node: str) -> str:
    return f"C_{node}"


def simulate_completion(gamma: LabelledTree) -> CurveConfig:
    """Replay the blow-ups for the essential tree of ``gamma``; full fiber plus boundary."""
    shape = essentialize(gamma).tree.shape
    cfg = initial_configuration()
    curve_of = {shape.root: F_ZERO}
    for u in shape.breadth_first():
        for child in shape.children[u]:
            center = curve_of[u]
            if center == SECTION:
                raise AssertionError("the section at infinity is never blown up")
            name = leaf_curve(child) if not shape.children[child] else node_curve(child)
            cfg, made = blow_up_point(cfg, BlowUpStep((center,), name))
            curve_of[child] = made
    leaves = {curve_of[e] for e in shape.leaves()}
    cfg = CurveConfig(tuple(replace(c, is_boundary=c.name not in leaves) for c in cfg.curves),
                      cfg.edges)
    _check_matches_tree(cfg, shape, curve_of)
    return cfg


def _check_matches_tree(cfg: CurveConfig, shape, curve_of):
    expected = {frozenset((F_INF, SECTION)), frozenset((SECTION, F_ZERO))}
    for c, p in shape.parent.items():
        expected.add(frozenset((curve_of[p], curve_of[c])))
    if set(cfg.edges) != expected:
        raise AssertionError("blow-up replay does not reproduce the tree")


def boundary_order(gamma: LabelledTree) -> List[str]:
    shape = essentialize(gamma).tree.shape
    out = [F_INF, SECTION]
    if shape.children[shape.root]:
        out.append(F_ZERO)
    out.extend(node_curve(u) for u in shape.internal_nodes() if u != shape.root)
    return out


def boundary_dual_graph(gamma: LabelledTree) -> CurveConfig:
    """Closed form: ``F_inf, C`` at 0, ``F_0`` at ``-|Ch(root)|``, node ``e`` at ``-1 - |Ch(e)|``.

    For the one-node tree ``F_0`` meets the surface, so the boundary is
    just ``F_inf - C``.
    """
    shape = essentialize(gamma).tree.shape
    root = shape.root
    curves = [Curve(F_INF, 0), Curve(SECTION, 0)]
    edges = {frozenset((F_INF, SECTION))}
    if shape.children[root]:
        k = len(shape.children[root])
        curves.append(Curve(F_ZERO, -k, True, 0, k))
        edges.add(frozenset((SECTION, F_ZERO)))
    for u in shape.internal_nodes():
        if u == root:
            continue
        k = len(shape.children[u])
        curves.append(Curve(node_curve(u), -1 - k, True, -1, k))
        parent = shape.parent[u]
        edges.add(frozenset((F_ZERO if parent == root else node_curve(parent), node_curve(u))))
    return CurveConfig(tuple(curves), frozenset(edges))


def is_minimal_completion(cfg: CurveConfig) -> bool:
    """No boundary (-1)-curve meets at most two other boundary curves."""
    boundary = cfg.boundary()
    for c in boundary.curves:
        if c.self_intersection == -1 and len(boundary.neighbours(c.name)) <= 2:
            return False
    return True


def is_path_graph(cfg: CurveConfig) -> bool:
    """Connected, acyclic, every vertex of degree at most two."""
    names = cfg.names()
    if not names:
        return True
    if len(cfg.edges) != len(names) - 1:
        return False
    if any(len(cfg.neighbours(n)) > 2 for n in names):
        return False
    seen = {names[0]}
    stack = [names[0]]
    while stack:
        u = stack.pop()
        for v in cfg.neighbours(u):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(names)


def ml_via_boundary(gamma: LabelledTree) -> bool:
    return is_path_graph(boundary_dual_graph(gamma))


def to_dot(cfg: CurveConfig, name: str = "boundary") -> str:
    """Graphviz DOT with labels ``name (s=k)``; node order as stored."""
    lines = [f'graph "{name}" {{']
    for c in cfg.curves:
        lines.append(f'  "{c.name}" [label="{c.name} (s={c.self_intersection})"];')
    order = {n: i for i, n in enumerate(cfg.names())}
    pairs = sorted((tuple(sorted(e, key=order.__getitem__)) for e in cfg.edges),
                   key=lambda p: (order[p[0]], order[p[1]]))
    for a, b in pairs:
        lines.append(f'  "{a}" -- "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
