"""(Q[x], x)-labelled rooted trees and their morphisms.

A labelled tree is a rooted tree with one polynomial ``sigma[leaf]`` per
leaf such that, for distinct leaves ``i, j`` whose first common ancestor is
at level ``d``, ``sigma[j] - sigma[i]`` has x-adic valuation exactly ``d``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .exactalg import (
    INF,
    NotDivisible,
    Poly,
    RationalSystem,
    div_exact_by_x_pow,
    ord_at_x,
    trunc_mod,
)
from .trees import RootedTree, UnknownNode


class CochainNotReduced(ValueError):
    pass


class FineConditionViolated(ValueError):
    pass


class ConditionViolated(ValueError):
    """Ultrametric data breaks condition 1, 2 or 3 of the gluing construction."""

    def __init__(self, condition: int, message: str):
        super().__init__(f"condition ({condition}) violated: {message}")
        self.condition = condition


class OverlapConflict(ValueError):
    pass


class CongruenceFailure(ValueError):
    pass


class NotCollapsible(ValueError):
    pass


class InvalidMorphism(ValueError):
    def __init__(self, violations):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = list(violations)


class InvalidLabelledTree(ValueError):
    def __init__(self, violations):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = list(violations)


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    leaves: Tuple[str, ...] = ()
    expected: object = None
    observed: object = None

    def __str__(self):
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True, eq=False)
class LabelledTree:
    shape: RootedTree
    sigma: Mapping[str, Poly]

    def __post_init__(self):
        object.__setattr__(self, "sigma", {k: _poly(v) for k, v in self.sigma.items()})

    def leaves(self) -> List[str]:
        return self.shape.leaves()

    def level(self, node: str) -> int:
        return self.shape.level(node)

    def label(self, leaf: str) -> Poly:
        return self.sigma[leaf]

    def __eq__(self, other):
        if not isinstance(other, LabelledTree):
            return NotImplemented
        return self.shape == other.shape and dict(self.sigma) == dict(other.sigma)

    def __hash__(self):
        return hash((self.shape, tuple(sorted(self.sigma.items()))))


def _poly(value) -> Poly:
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)):
        return Poly.constant(value)
    if isinstance(value, (list, tuple)):
        return Poly(value)
    raise TypeError(f"cannot use {value!r} as a label")


# ---------------------------------------------------------------------------
# compatibility


def validate(gamma: LabelledTree) -> List[Violation]:
    """All violations of the compatibility condition (empty iff valid)."""
    shape = gamma.shape
    leaves = shape.leaves()
    out = []
    missing = [e for e in leaves if e not in gamma.sigma]
    for e in missing:
        out.append(Violation("missing-label", f"leaf {e!r} has no label", (e,)))
    extra = sorted(set(gamma.sigma) - set(leaves))
    for e in extra:
        out.append(Violation("stray-label", f"{e!r} is labelled but is not a leaf", (e,)))
    if missing:
        return out
    for a, i in enumerate(leaves):
        for j in leaves[a + 1:]:
            d = shape.level(shape.first_common_ancestor(i, j))
            if d >= min(shape.level(i), shape.level(j)):
                continue
            v = ord_at_x(gamma.sigma[j] - gamma.sigma[i])
            if v != d:
                out.append(Violation(
                    "compatibility",
                    f"leaves {i!r}, {j!r}: common ancestor at level {d} but "
                    f"ord(sigma_{j} - sigma_{i}) = {v}",
                    (i, j), d, v))
    return out


def is_valid(gamma: LabelledTree) -> bool:
    return not validate(gamma)


def leaf_levels(gamma: LabelledTree) -> Dict[str, int]:
    return {e: gamma.shape.level(e) for e in gamma.shape.leaves()}


def reduce(gamma: LabelledTree) -> LabelledTree:
    """Canonical representative: every label truncated below its leaf level."""
    return LabelledTree(gamma.shape, {e: trunc_mod(s, gamma.shape.level(e))
                                      for e, s in gamma.sigma.items()})


# ---------------------------------------------------------------------------
# fine weighted trees


@dataclass(frozen=True, eq=False)
class WeightedTree:
    """Tree with a rational weight on each edge, keyed by the edge's child node."""

    shape: RootedTree
    weight: Mapping[str, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "weight", {k: Fraction(v) for k, v in self.weight.items()})

    def __eq__(self, other):
        if not isinstance(other, WeightedTree):
            return NotImplemented
        return self.shape == other.shape and dict(self.weight) == dict(other.weight)

    __hash__ = None


def fine_violations(w: WeightedTree) -> List[Violation]:
    out = []
    for u in w.shape.nodes:
        if u == w.shape.root:
            continue
        if u not in w.weight:
            out.append(Violation("missing-weight", f"edge into {u!r} has no weight", (u,)))
    for u, cs in w.shape.children.items():
        seen: Dict[Fraction, str] = {}
        for c in cs:
            if c not in w.weight:
                continue
            wc = w.weight[c]
            if wc in seen:
                out.append(Violation(
                    "fine", f"children {seen[wc]!r} and {c!r} of {u!r} share weight {wc}",
                    (seen[wc], c), None, wc))
            else:
                seen[wc] = c
    return out


def to_weighted(gamma: LabelledTree) -> WeightedTree:
    """Edge weights read off the label coefficients (labels must be reduced)."""
    shape = gamma.shape
    weight: Dict[str, Fraction] = {}
    for e in shape.leaves():
        s = gamma.sigma[e]
        m = shape.level(e)
        if s.degree >= m:
            raise CochainNotReduced(f"label of {e!r} has degree {s.degree} >= level {m}")
        path = shape.path(e)
        for j in range(m):
            child = path[j + 1]
            c = s.coeff(j)
            if child in weight and weight[child] != c:
                raise FineConditionViolated(
                    f"labels disagree on the weight of the edge into {child!r}")
            weight[child] = c
    w = WeightedTree(shape, weight)
    problems = fine_violations(w)
    if problems:
        raise FineConditionViolated("; ".join(map(str, problems)))
    return w


def from_weighted(w: WeightedTree) -> LabelledTree:
    problems = fine_violations(w)
    if problems:
        raise FineConditionViolated("; ".join(map(str, problems)))
    shape = w.shape
    sigma = {}
    for e in shape.leaves():
        path = shape.path(e)
        sigma[e] = Poly([w.weight[c] for c in path[1:]])
    return LabelledTree(shape, sigma)


# ---------------------------------------------------------------------------
# ultrametric data


@dataclass(frozen=True)
class UltrametricData:
    """Leaf levels ``m``, first-common-ancestor levels ``d`` and labels ``sigma``.

    Indices are 0-based; the diagonal of ``d`` is ignored.
    """

    m: Tuple[int, ...]
    d: Tuple[Tuple[int, ...], ...]
    sigma: Tuple[Poly, ...]

    @property
    def n(self) -> int:
        return len(self.m)

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(v) for v in self.m))
        object.__setattr__(self, "d", tuple(tuple(int(v) for v in row) for row in self.d))
        object.__setattr__(self, "sigma", tuple(_poly(s) for s in self.sigma))


def ultrametric_violations(u: UltrametricData) -> List[Tuple[int, str]]:
    """Pairs ``(condition number, message)``; empty iff the data is valid."""
    n = u.n
    out = []
    if n < 1:
        out.append((1, "need at least one leaf"))
        return out
    if len(u.d) != n or any(len(row) != n for row in u.d) or len(u.sigma) != n:
        out.append((1, "d must be n x n and sigma must have n entries"))
        return out
    for i in range(n):
        if u.m[i] < 1:
            out.append((1, f"m_{i} = {u.m[i]} is not positive"))
    for i in range(n):
        for j in range(i + 1, n):
            if u.d[i][j] != u.d[j][i]:
                out.append((1, f"d_{i}{j} != d_{j}{i}"))
            elif not 0 <= u.d[i][j] < min(u.m[i], u.m[j]):
                out.append((1, f"d_{i}{j} = {u.d[i][j]} not in [0, min(m_{i}, m_{j}))"))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if len({i, j, k}) < 3:
                    continue
                if min(u.d[i][j], u.d[i][k]) != min(u.d[j][i], u.d[j][k]):
                    out.append((2, f"min(d_{i}{j}, d_{i}{k}) != min(d_{j}{i}, d_{j}{k})"))
    for i in range(n):
        for j in range(i + 1, n):
            v = ord_at_x(u.sigma[j] - u.sigma[i])
            if v != u.d[i][j]:
                out.append((3, f"ord(sigma_{j} - sigma_{i}) = {v} but d_{i}{j} = {u.d[i][j]}"))
    return out


def build_from_ultrametric(u: UltrametricData, return_leaves: bool = False):
    """Glue the chains ``C_i`` of length ``m_i`` along their first ``d_ij + 1`` nodes.

    Nodes are named ``n0, n1, ...`` in creation order (``n0`` is the root).
    With ``return_leaves`` the leaf id of datum ``i`` is returned as well.
    """
    problems = ultrametric_violations(u)
    if problems:
        cond = min(c for c, _ in problems)
        raise ConditionViolated(cond, "; ".join(msg for c, msg in problems if c == cond))
    counter = iter(range(10 ** 9))

    def fresh():
        return f"n{next(counter)}"

    root = fresh()
    chains: List[List[str]] = []
    edges = []
    for i in range(u.n):
        # glue onto the earlier chain sharing the longest prefix
        best, depth = None, -1
        for j in range(i):
            if u.d[i][j] > depth:
                best, depth = j, u.d[i][j]
        if best is None:
            nodes = [root]
            depth = 0
        else:
            nodes = chains[best][:depth + 1]
        while len(nodes) <= u.m[i]:
            node = fresh()
            edges.append((nodes[-1], node))
            nodes.append(node)
        chains.append(nodes)
    shape = RootedTree(root, edges)
    leaf_ids = [c[-1] for c in chains]
    gamma = LabelledTree(shape, {leaf_ids[i]: u.sigma[i] for i in range(u.n)})
    problems = validate(gamma)
    if problems:  # conditions (1)-(3) should make this unreachable
        raise ConditionViolated(3, "; ".join(map(str, problems)))
    return (gamma, leaf_ids) if return_leaves else gamma


def extract_ultrametric(gamma: LabelledTree, leaves: Optional[Sequence[str]] = None) -> UltrametricData:
    """Recover ``(m, d, sigma)`` of a labelled tree, leaves in the given order."""
    shape = gamma.shape
    leaves = list(leaves) if leaves is not None else shape.leaves()
    n = len(leaves)
    d = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if a != b:
                d[a][b] = shape.level(shape.first_common_ancestor(leaves[a], leaves[b]))
    return UltrametricData(tuple(shape.level(e) for e in leaves), tuple(map(tuple, d)),
                           tuple(gamma.sigma[e] for e in leaves))


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True, eq=False)
class TreeMorphism:
    source: LabelledTree
    target: LabelledTree
    node_map: Mapping[str, str]

    def leaf_map(self) -> Dict[str, str]:
        return {e: self.node_map[e] for e in self.source.shape.leaves()}

    def compose_after(self, first: "TreeMorphism") -> "TreeMorphism":
        """``self o first``."""
        return TreeMorphism(first.source, self.target,
                            {u: self.node_map[v] for u, v in first.node_map.items()})


def identity_morphism(gamma: LabelledTree) -> TreeMorphism:
    return TreeMorphism(gamma, gamma, {u: u for u in gamma.shape.nodes})


def validate_morphism(phi: TreeMorphism) -> List[Violation]:
    src, tgt = phi.source.shape, phi.target.shape
    tau = phi.node_map
    out = []
    for u in src.nodes:
        if u not in tau:
            out.append(Violation("partial", f"node {u!r} has no image", (u,)))
        elif tau[u] not in tgt:
            out.append(Violation("partial", f"image {tau[u]!r} of {u!r} is not a target node", (u,)))
    if out:
        return out

    for c, p in src.parent.items():
        if not tgt.is_ancestor(tau[p], tau[c]):
            out.append(Violation("order", f"edge {p!r} < {c!r} maps to {tau[p]!r}, {tau[c]!r} "
                                          "which are not ordered", (p, c)))

    for e in src.leaves():
        image = tau[e]
        path = src.path(e)
        if not tgt.is_leaf(image):
            out.append(Violation("maximal-chain", f"leaf {e!r} maps to non-leaf {image!r}", (e,)))
            continue
        if {tau[u] for u in path} != set(tgt.path(image)):
            out.append(Violation("maximal-chain",
                                 f"chain below {e!r} does not map onto the chain below {image!r}", (e,)))
            continue
        mj = tgt.level(image)
        if src.level(e) < mj:
            out.append(Violation("leaf-level", f"leaf {e!r} at level {src.level(e)} maps to "
                                               f"leaf {image!r} at higher level {mj}", (e,)))
            continue
        tpath = tgt.path(image)
        if any(tau[path[k]] != tpath[min(k, mj)] for k in range(len(path))):
            out.append(Violation("chain-map", f"chain below {e!r} is not mapped level by level", (e,)))

    fibers: Dict[str, List[str]] = {}
    for u in src.nodes:
        fibers.setdefault(tau[u], []).append(u)
    for v, fiber in fibers.items():
        if len(fiber) == 1:
            continue
        top = min(fiber, key=src.level)
        if set(fiber) != set(src.descendants(top)):
            out.append(Violation("fiber", f"preimage of {v!r} is neither a point nor a maximal subtree",
                                 tuple(fiber)))

    for e in src.leaves():
        image = tau[e]
        if image not in phi.target.sigma or e not in phi.source.sigma:
            continue
        if not tgt.is_leaf(image):
            continue
        mj = tgt.level(image)
        diff = phi.source.sigma[e] - phi.target.sigma[image]
        if ord_at_x(diff) < mj:
            out.append(Violation("label", f"sigma_{e} - sigma_{image} is not divisible by x^{mj}",
                                 (e, image), mj, ord_at_x(diff)))
    return out


def glue_morphisms(source: LabelledTree, target: LabelledTree,
                   leaf_images: Mapping[str, str]) -> TreeMorphism:
    """The morphism whose restriction to each leaf chain is ``e'_{i,k} -> e_{j(i), min(k, m_j)}``."""
    src, tgt = source.shape, target.shape
    node_map: Dict[str, str] = {}
    for e in src.leaves():
        if e not in leaf_images:
            raise OverlapConflict(f"no image given for leaf {e!r}")
        j = leaf_images[e]
        if j not in tgt or not tgt.is_leaf(j):
            raise CongruenceFailure(f"image {j!r} of {e!r} is not a leaf of the target")
        mj = tgt.level(j)
        if src.level(e) < mj:
            raise CongruenceFailure(f"leaf {e!r} is below level {mj} of its image {j!r}")
        if ord_at_x(source.sigma[e] - target.sigma[j]) < mj:
            raise CongruenceFailure(f"sigma_{e} is not congruent to sigma_{j} mod x^{mj}")
        tpath = tgt.path(j)
        for k, u in enumerate(src.path(e)):
            v = tpath[min(k, mj)]
            if node_map.setdefault(u, v) != v:
                raise OverlapConflict(f"node {u!r} forced to both {node_map[u]!r} and {v!r}")
    phi = TreeMorphism(source, target, node_map)
    problems = validate_morphism(phi)
    if problems:
        raise InvalidMorphism(problems)
    return phi


def blow_down(gamma: LabelledTree, e: str) -> Tuple[LabelledTree, TreeMorphism]:
    """Collapse the leaves at ``e``; ``e`` becomes a leaf labelled ``trunc(sigma_c, level(e))``."""
    shape = gamma.shape
    if e not in shape:
        raise UnknownNode(e)
    kids = shape.children[e]
    if not kids:
        raise NotCollapsible(f"{e!r} is a leaf")
    if any(shape.children[c] for c in kids):
        raise NotCollapsible(f"not every child of {e!r} is a leaf")
    new_shape = shape.without(kids)
    sigma = {k: v for k, v in gamma.sigma.items() if k not in kids}
    sigma[e] = trunc_mod(gamma.sigma[kids[0]], shape.level(e))
    new = LabelledTree(new_shape, {u: sigma[u] for u in new_shape.leaves()})
    node_map = {u: (e if u in kids else u) for u in shape.nodes}
    return new, TreeMorphism(gamma, new, node_map)


@dataclass(frozen=True)
class Factorization:
    blow_downs: Tuple[Tuple[str, TreeMorphism], ...]
    embedding: TreeMorphism

    def recompose(self) -> Dict[str, str]:
        """Node map of ``embedding o tau_k o ... o tau_1``."""
        if not self.blow_downs:
            return dict(self.embedding.node_map)
        acc = {u: u for u in self.blow_downs[0][1].source.shape.nodes}
        for _, tau in self.blow_downs:
            acc = {u: tau.node_map[v] for u, v in acc.items()}
        return {u: self.embedding.node_map[v] for u, v in acc.items()}


def factor_morphism(phi: TreeMorphism) -> Factorization:
    """Greedy factorization into blow-downs of leaves followed by an embedding."""
    problems = validate_morphism(phi)
    if problems:
        raise InvalidMorphism(problems)
    current = phi.source
    steps = []
    while True:
        shape = current.shape
        for u in shape.internal_nodes():
            kids = shape.children[u]
            if all(not shape.children[c] and phi.node_map[c] == phi.node_map[u] for c in kids):
                current, tau = blow_down(current, u)
                steps.append((u, tau))
                break
        else:
            break
    embedding = TreeMorphism(current, phi.target,
                             {u: phi.node_map[u] for u in current.shape.nodes})
    images = list(embedding.node_map.values())
    if len(set(images)) != len(images):
        raise InvalidMorphism([Violation("embedding", "residual map is not injective")])
    return Factorization(tuple(steps), embedding)


# ---------------------------------------------------------------------------
# essential subtrees and equivalence


@dataclass(frozen=True)
class Essentialization:
    tree: LabelledTree
    c: Poly
    m: int

    def __iter__(self):
        return iter((self.tree, self.c, self.m))


def essentialize(gamma: LabelledTree) -> Essentialization:
    """Split ``sigma_i = c + x^m * es_sigma_i`` over the essential subtree.

    For a chain of positive length the essential subtree is the leaf, with
    ``c = sigma`` and label 0; a one-node tree is already essential.
    """
    shape = gamma.shape
    top, m = shape.essential_subtree()
    sub = shape.maximal_subtree(top)
    leaves = shape.leaves()
    if m == 0:
        return Essentialization(gamma, Poly(), 0)
    if shape.is_chain():
        (leaf,) = leaves
        return Essentialization(LabelledTree(sub, {leaf: Poly()}), gamma.sigma[leaf], m)
    c = trunc_mod(gamma.sigma[leaves[0]], m)
    sigma = {e: div_exact_by_x_pow(gamma.sigma[e] - c, m) for e in leaves}
    return Essentialization(LabelledTree(sub, sigma), c, m)


@dataclass(frozen=True)
class EquivalenceWitness:
    """``a * es_sigma'_i - es_sigma_{j(i)} + b`` vanishes mod ``x^{m_{j(i)}}``.

    ``leaf_map`` and ``node_map`` go from the essential subtree of the second
    tree to that of the first.
    """

    leaf_map: Dict[str, str]
    node_map: Dict[str, str]
    a: Fraction
    b: Poly


def _shape_signatures(shape: RootedTree) -> Dict[str, str]:
    memo: Dict[str, str] = {}
    for u in reversed(shape.preorder()):
        memo[u] = "(" + "".join(sorted(memo[c] for c in shape.children[u])) + ")"
    return memo


def check_witness(gamma: LabelledTree, gamma2: LabelledTree, w: EquivalenceWitness) -> bool:
    """Independent check of a witness against the definition."""
    es, es2 = essentialize(gamma).tree, essentialize(gamma2).tree
    if w.a == 0:
        return False
    nm = w.node_map
    s, s2 = es.shape, es2.shape
    if set(nm) != set(s2.nodes) or sorted(nm.values()) != sorted(s.nodes):
        return False
    if nm[s2.root] != s.root:
        return False
    if any(nm[p] != s.parent.get(nm[c]) for c, p in s2.parent.items()):
        return False
    for i in s2.leaves():
        j = nm[i]
        if w.leaf_map.get(i) != j:
            return False
        expr = es2.sigma[i] * w.a - es.sigma[j] + w.b
        if ord_at_x(expr) < s.level(j):
            return False
    return True


def decide_equivalence(gamma: LabelledTree, gamma2: LabelledTree,
                       strict_constant_b: bool = False) -> Optional[EquivalenceWitness]:
    """Search for an equivalence between two labelled trees.

    Leaves of the second essential tree are assigned to leaves of the first
    by backtracking; each assignment fixes the node map along the leaf chain
    and adds the equations ``a*coeff_t(s'_i) + b_t = coeff_t(s_j)``,
    ``t < m_j``, to an incremental solver, so inconsistent branches are cut
    as soon as they appear.
    """
    es = essentialize(gamma).tree
    es2 = essentialize(gamma2).tree
    s, s2 = es.shape, es2.shape
    sig, sig2 = _shape_signatures(s), _shape_signatures(s2)
    if sig[s.root] != sig2[s2.root]:
        return None
    height = s.height()
    nb = 1 if strict_constant_b else max(height, 1)
    nvars = 1 + nb  # a, b_0 .. b_{nb-1}
    src_leaves = s2.leaves()
    tgt_leaves = s.leaves()
    paths = {e: s.path(e) for e in tgt_leaves}
    paths2 = {e: s2.path(e) for e in src_leaves}

    def equations(i, j, system):
        mj = s.level(j)
        for t in range(mj):
            coeffs = [Fraction(0)] * nvars
            coeffs[0] = es2.sigma[i].coeff(t)
            if t < nb:
                coeffs[1 + t] = Fraction(1)
            if not system.add(coeffs, es.sigma[j].coeff(t)):
                return False
        return system.fixed_value(0) != 0

    def search(k, node_map, inverse, system):
        if k == len(src_leaves):
            sol = system.solve(nonzero=0)
            if sol is None:
                return None
            return node_map, sol
        i = src_leaves[k]
        p2 = paths2[i]
        for j in tgt_leaves:
            if j in inverse:
                continue
            p = paths[j]
            if len(p) != len(p2):
                continue
            if any(sig[u] != sig2[v] for u, v in zip(p, p2)):
                continue
            if any(node_map.get(v, u) != u or inverse.get(u, v) != v for u, v in zip(p, p2)):
                continue
            trial = system.copy()
            if not equations(i, j, trial):
                continue
            nm, inv = dict(node_map), dict(inverse)
            for u, v in zip(p, p2):
                nm[v] = u
                inv[u] = v
            found = search(k + 1, nm, inv, trial)
            if found is not None:
                return found
        return None

    found = search(0, {}, {}, RationalSystem(nvars))
    if found is None:
        return None
    node_map, sol = found
    a = sol[0]
    b = Poly(sol[1:])
    return EquivalenceWitness({i: node_map[i] for i in src_leaves}, node_map, a, b)


def shape_isomorphisms(s2: RootedTree, s: RootedTree):
    """Every isomorphism ``s2 -> s`` as a node map (exhaustive, for small trees)."""
    sig, sig2 = _shape_signatures(s), _shape_signatures(s2)
    if sig[s.root] != sig2[s2.root]:
        return

    def match(pairs):
        if not pairs:
            yield {}
            return
        (v, u), rest = pairs[0], pairs[1:]
        kids2, kids = s2.children[v], s.children[u]
        for perm in _bijections(list(kids2), list(kids), lambda a, b: sig2[a] == sig[b]):
            for tail in match(rest + list(perm.items())):
                out = {v: u}
                out.update(tail)
                yield out

    yield from match([(s2.root, s.root)])


def _bijections(xs, ys, ok):
    if not xs:
        yield {}
        return
    x, rest = xs[0], xs[1:]
    for k, y in enumerate(ys):
        if ok(x, y):
            for tail in _bijections(rest, ys[:k] + ys[k + 1:], ok):
                out = {x: y}
                out.update(tail)
                yield out
