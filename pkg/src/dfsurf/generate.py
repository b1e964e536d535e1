"""Random valid labelled trees, equivalent copies and morphisms for property tests."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .exactalg import Poly
from .labelled import LabelledTree, TreeMorphism, WeightedTree, from_weighted
from .trees import RootedTree


@dataclass(frozen=True)
class TreeConfig:
    max_leaves: int = 12
    max_height: int = 6
    max_children: int = 3
    weights: Tuple[int, ...] = (-3, -2, -1, 0, 1, 2, 3)
    perturb_degree: int = 2
    chain_prob: float = 0.35


def random_shape(rng: random.Random, cfg: TreeConfig = TreeConfig()) -> RootedTree:
    """Random shape with every leaf at level >= 1 (the one-node tree excluded)."""
    while True:
        edges = []
        counter = [0]

        def fresh():
            counter[0] += 1
            return f"u{counter[0]}"

        frontier = [("u0", 0)]
        leaves = 0
        while frontier:
            node, lvl = frontier.pop(0)
            budget = cfg.max_leaves - leaves - len(frontier)
            if lvl >= cfg.max_height or budget <= 1:
                k = 0 if lvl > 0 else 1
            elif lvl > 0 and rng.random() < 0.3:
                k = 0
            elif rng.random() < cfg.chain_prob:
                k = 1
            else:
                k = rng.randint(1, min(cfg.max_children, budget))
            if k == 0:
                leaves += 1
            for _ in range(k):
                c = fresh()
                edges.append((node, c))
                frontier.append((c, lvl + 1))
        shape = RootedTree("u0", edges)
        if len(shape.leaves()) <= cfg.max_leaves and shape.height() <= cfg.max_height:
            return shape


def random_poly(rng: random.Random, degree: int, coeffs=(-2, -1, 0, 1, 2)) -> Poly:
    return Poly([Fraction(rng.choice(coeffs)) for _ in range(degree + 1)])


def random_labelled_tree(rng: random.Random, cfg: TreeConfig = TreeConfig(),
                         shape: Optional[RootedTree] = None) -> LabelledTree:
    """Fine weighted tree on a random shape, then ``sigma_i += x^{m_i} * noise``."""
    shape = shape if shape is not None else random_shape(rng, cfg)
    weight: Dict[str, Fraction] = {}
    for u in shape.nodes:
        kids = shape.children[u]
        ws = rng.sample(cfg.weights, len(kids))
        for c, w in zip(kids, ws):
            weight[c] = Fraction(w)
    gamma = from_weighted(WeightedTree(shape, weight))
    sigma = {}
    for e in shape.leaves():
        noise = random_poly(rng, rng.randint(0, cfg.perturb_degree))
        sigma[e] = gamma.sigma[e] + noise.shift(shape.level(e))
    return LabelledTree(shape, sigma)


def relabel_nodes(gamma: LabelledTree, rng: random.Random, prefix: str = "w") -> Tuple[LabelledTree, Dict[str, str]]:
    """Rename nodes and shuffle child order; returns the tree and old -> new names."""
    shape = gamma.shape
    names = list(shape.nodes)
    fresh = [f"{prefix}{k}" for k in range(len(names))]
    rng.shuffle(fresh)
    ren = dict(zip(names, fresh))
    edges = []
    order = [shape.root]
    while order:
        u = order.pop(0)
        kids = list(shape.children[u])
        rng.shuffle(kids)
        edges.extend((ren[u], ren[c]) for c in kids)
        order.extend(kids)
    new_shape = RootedTree(ren[shape.root], edges)
    return LabelledTree(new_shape, {ren[e]: s for e, s in gamma.sigma.items()}), ren


def random_equivalent(gamma: LabelledTree, rng: random.Random,
                      a_choices=(1, -1, 2, -2, 3), b_degree: int = 3):
    """A tree equivalent to ``gamma``: ``sigma'_i = (sigma_i - b) / a + x^{m_i} * noise``.

    Returns ``(gamma2, a, b, renaming)``.
    """
    a = Fraction(rng.choice(a_choices))
    b = random_poly(rng, b_degree)
    shape = gamma.shape
    sigma = {}
    for e in shape.leaves():
        noise = random_poly(rng, rng.randint(0, 2)).shift(shape.level(e))
        sigma[e] = (gamma.sigma[e] - b) * (1 / a) + noise
    moved, ren = relabel_nodes(LabelledTree(shape, sigma), rng)
    return moved, a, b, ren


def random_morphism(rng: random.Random, cfg: TreeConfig = TreeConfig(),
                    max_blowups: int = 3) -> TreeMorphism:
    """Embedding of a leaf-closed subtree followed by 0..max_blowups inverse blow-downs."""
    target = random_labelled_tree(rng, cfg)
    tshape = target.shape
    leaves = tshape.leaves()
    keep = rng.sample(leaves, rng.randint(1, len(leaves)))
    kept_nodes = {u for e in keep for u in tshape.path(e)}
    edges = [(p, c) for p, c in tshape.edges() if c in kept_nodes]
    shape = RootedTree(tshape.root, edges)
    sigma = {e: target.sigma[e] for e in shape.leaves()}
    node_map = {u: u for u in shape.nodes}
    counter = [0]
    for _ in range(rng.randint(0, max_blowups)):
        e = rng.choice(shape.leaves())
        m = shape.level(e)
        k = rng.randint(1, 3)
        ws = rng.sample(cfg.weights, k)
        new_edges = list(shape.edges())
        base = sigma.pop(e)
        for w in ws:
            counter[0] += 1
            c = f"z{counter[0]}"
            new_edges.append((e, c))
            noise = random_poly(rng, rng.randint(0, 1)).shift(m + 1)
            sigma[c] = base + Poly.monomial(m, w) + noise
            node_map[c] = node_map[e]
        shape = RootedTree(shape.root, new_edges)
    source = LabelledTree(shape, sigma)
    return TreeMorphism(source, target, node_map)
