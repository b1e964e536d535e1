"""``dfsurf`` command-line front end.

Tree files are line based; ``#`` starts a comment and ``;`` separates
statements on one line::

    format weighted            format cochain
    root r                     root r
    edge r a 1                 edge r a
    edge r b -1                leaf a sigma 1+2*x

Child order is file order.  Without a ``format`` line the format is
inferred: any ``leaf`` statement means cochain, otherwise weighted.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import completion, labelled, surface
from .exactalg import Poly, PolySyntaxError, parse_poly, parse_rational
from .labelled import (
    LabelledTree,
    UltrametricData,
    WeightedTree,
    Violation,
)
from .trees import RootedTree, TreeStructureError


class SyntaxError(ValueError):  # noqa: A001 - the public name of the parse error
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class ValidationError(ValueError):
    def __init__(self, violations: Sequence):
        self.violations = list(violations)
        super().__init__("; ".join(map(str, self.violations)))


def _statements(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        for part in body.split(";"):
            words = part.split()
            if words:
                yield lineno, words


def _rational(tok: str, lineno: int) -> Fraction:
    try:
        return parse_rational(tok)
    except (PolySyntaxError, ValueError, ZeroDivisionError) as exc:
        raise SyntaxError(lineno, f"bad rational {tok!r}: {exc}") from None


def _poly(text: str, lineno: int) -> Poly:
    try:
        return parse_poly(text)
    except (PolySyntaxError, ZeroDivisionError) as exc:
        raise SyntaxError(lineno, f"bad polynomial {text!r}: {exc}") from None


def parse_tree_file(text: str, validate: bool = True) -> LabelledTree:
    fmt: Optional[str] = None
    root: Optional[str] = None
    edges: List[Tuple[str, str]] = []
    weights: Dict[str, Fraction] = {}
    sigma: Dict[str, Poly] = {}
    saw_leaf = False
    saw_weight = False
    for lineno, words in _statements(text):
        kw = words[0]
        if kw == "format":
            if len(words) != 2 or words[1] not in ("weighted", "cochain"):
                raise SyntaxError(lineno, "expected 'format weighted' or 'format cochain'")
            if fmt is not None:
                raise SyntaxError(lineno, "format given twice")
            fmt = words[1]
        elif kw == "root":
            if len(words) != 2:
                raise SyntaxError(lineno, "expected 'root <id>'")
            if root is not None:
                raise SyntaxError(lineno, "root given twice")
            root = words[1]
        elif kw == "edge":
            if len(words) not in (3, 4):
                raise SyntaxError(lineno, "expected 'edge <parent> <child> [<weight>]'")
            edges.append((words[1], words[2]))
            if len(words) == 4:
                if fmt == "cochain":
                    raise SyntaxError(lineno, "cochain edges carry no weight")
                weights[words[2]] = _rational(words[3], lineno)
                saw_weight = True
            elif fmt == "weighted":
                raise SyntaxError(lineno, "weighted edges need a weight")
        elif kw == "leaf":
            if len(words) < 4 or words[2] != "sigma":
                raise SyntaxError(lineno, "expected 'leaf <id> sigma <polynomial>'")
            if fmt == "weighted":
                raise SyntaxError(lineno, "weighted files have no leaf labels")
            if words[1] in sigma:
                raise SyntaxError(lineno, f"leaf {words[1]!r} labelled twice")
            sigma[words[1]] = _poly(" ".join(words[3:]), lineno)
            saw_leaf = True
        else:
            raise SyntaxError(lineno, f"unknown statement {kw!r}")
    if root is None:
        raise SyntaxError(0, "missing 'root' statement")
    if fmt is None:
        fmt = "cochain" if saw_leaf or not saw_weight else "weighted"
    if fmt == "weighted" and len(weights) != len(edges):
        raise SyntaxError(0, "every weighted edge needs a weight")
    if fmt == "cochain" and saw_weight:
        raise SyntaxError(0, "cochain files carry no edge weights")
    try:
        shape = RootedTree(root, edges)
    except TreeStructureError as exc:
        raise ValidationError([Violation("structure", str(exc))]) from None
    if fmt == "weighted":
        w = WeightedTree(shape, weights)
        problems = labelled.fine_violations(w)
        if problems:
            raise ValidationError(problems)
        return labelled.from_weighted(w)
    leaves = set(shape.leaves())
    extra = sorted(set(sigma) - leaves)
    missing = [e for e in shape.leaves() if e not in sigma]
    problems = [Violation("label", f"{e!r} is not a leaf", (e,)) for e in extra]
    problems += [Violation("label", f"leaf {e!r} has no label", (e,)) for e in missing]
    if problems:
        raise ValidationError(problems)
    gamma = LabelledTree(shape, sigma)
    if validate:
        problems = labelled.validate(gamma)
        if problems:
            raise ValidationError(problems)
    return gamma


def serialize_cochain(gamma: LabelledTree) -> str:
    shape = gamma.shape
    lines = ["format cochain", f"root {shape.root}"]
    for p, c in shape.edges():
        lines.append(f"edge {p} {c}")
        if shape.is_leaf(c):
            lines.append(f"leaf {c} sigma {gamma.sigma[c].to_text()}")
    if shape.is_leaf(shape.root):
        lines.append(f"leaf {shape.root} sigma {gamma.sigma[shape.root].to_text()}")
    return "\n".join(lines) + "\n"


def serialize_weighted(gamma: LabelledTree) -> str:
    w = labelled.to_weighted(labelled.reduce(gamma))
    lines = ["format weighted", f"root {gamma.shape.root}"]
    for p, c in gamma.shape.edges():
        lines.append(f"edge {p} {c} {w.weight[c]}")
    return "\n".join(lines) + "\n"


def parse_map_file(text: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for lineno, words in _statements(text):
        if len(words) != 3 or words[0] != "map":
            raise SyntaxError(lineno, "expected 'map <leaf'> <leaf>'")
        if words[1] in out:
            raise SyntaxError(lineno, f"{words[1]!r} mapped twice")
        out[words[1]] = words[2]
    return out


def parse_metric_file(text: str) -> UltrametricData:
    n = None
    m: List[int] = []
    d: Dict[Tuple[int, int], int] = {}
    sig: Dict[int, Poly] = {}
    for lineno, words in _statements(text):
        kw = words[0]
        try:
            if kw == "n" and len(words) == 2:
                n = int(words[1])
            elif kw == "m" and len(words) >= 2:
                m.extend(int(t) for t in words[1:])
            elif kw == "d" and len(words) == 4:
                i, j, v = (int(t) for t in words[1:])
                d[(i, j)] = d[(j, i)] = v
            elif kw == "sigma" and len(words) >= 3:
                sig[int(words[1])] = _poly(" ".join(words[2:]), lineno)
            else:
                raise SyntaxError(lineno, f"cannot read statement {' '.join(words)!r}")
        except ValueError as exc:
            if isinstance(exc, SyntaxError):
                raise
            raise SyntaxError(lineno, str(exc)) from None
    if n is None:
        raise SyntaxError(0, "missing 'n' statement")
    if len(m) != n:
        raise SyntaxError(0, f"expected {n} leaf levels, got {len(m)}")
    missing = [i for i in range(n) if i not in sig]
    if missing:
        raise SyntaxError(0, f"missing sigma for {missing}")
    for i in range(n):
        for j in range(n):
            if i != j and (i, j) not in d:
                raise SyntaxError(0, f"missing d {i} {j}")
    rows = tuple(tuple(0 if i == j else d[(i, j)] for j in range(n)) for i in range(n))
    return UltrametricData(tuple(m), rows, tuple(sig[i] for i in range(n)))


def parse_comb_file(text: str) -> surface.CombSpec:
    """One ``poly <distinguished> <other roots...>`` line per ``P_i``."""
    roots, dist = [], []
    for lineno, words in _statements(text):
        if words[0] != "poly" or len(words) < 2:
            raise SyntaxError(lineno, "expected 'poly <distinguished root> <roots...>'")
        vals = [_rational(t, lineno) for t in words[1:]]
        dist.append(vals[0])
        roots.append(tuple(vals))
    return surface.CombSpec(tuple(roots), tuple(dist))


# ---------------------------------------------------------------------------
# commands


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str) -> LabelledTree:
    return parse_tree_file(_read(path))


def _bool(v: bool) -> str:
    return "true" if v else "false"


def cmd_validate(args, out) -> int:
    gamma = _load(args.tree)
    out.write(f"valid: {len(gamma.shape.leaves())} leaves, height {gamma.shape.height()}\n")
    return 0


def cmd_essentialize(args, out) -> int:
    es = labelled.essentialize(_load(args.tree))
    out.write(f"# c = {es.c.to_text()}, m = {es.m}\n")
    out.write(serialize_cochain(es.tree))
    return 0


def cmd_equiv(args, out) -> int:
    g1, g2 = _load(args.first), _load(args.second)
    w = labelled.decide_equivalence(g1, g2, strict_constant_b=args.strict_constant_b)
    if w is None:
        out.write("not equivalent\n")
        return 1 if args.exit_code else 0
    pairs = ", ".join(f"{k}->{v}" for k, v in sorted(w.leaf_map.items()))
    out.write(f"a={w.a}, b={w.b.to_text()}, leaf map {pairs}\n")
    return 0


def cmd_ml(args, out) -> int:
    gamma = _load(args.tree)
    comb = surface.ml_trivial(gamma)
    chain = completion.ml_via_boundary(gamma)
    out.write(f"ML-trivial: {_bool(comb)} (comb test), {_bool(chain)} (boundary chain test)\n")
    return 1 if args.exit_code and not comb else 0


def cmd_comb(args, out) -> int:
    spec = parse_comb_file(_read(args.spec))
    system, gamma = surface.emit_comb_equations(spec)
    if args.tree_only:
        out.write(serialize_cochain(gamma))
        return 0
    out.write(system.to_json() + "\n")
    return 0


def cmd_equations(args, out) -> int:
    system = surface.emit_broom_equations(_load(args.tree))
    if args.json:
        out.write(system.to_json() + "\n")
    else:
        for r in system.to_json_dict()["relations"]:
            out.write(f"{r} = 0\n")
    return 0


def cmd_gluing(args, out) -> int:
    d = surface.descriptor(_load(args.tree))
    out.write(f"h = {d.h}\n")
    for e, mu, s in zip(d.leaves, d.mu, d.sigma):
        out.write(f"chart {e}: mu = {mu}, sigma = {s.to_text()}\n")
    for i, ei in enumerate(d.leaves):
        for j, ej in enumerate(d.leaves):
            if i != j:
                out.write(f"g[{ei},{ej}] = {d.transition[i][j]}\n")
    out.write(f"affine: {_bool(surface.is_affine(d))}\n")
    return 0


def cmd_boundary(args, out) -> int:
    gamma = _load(args.tree)
    cfg = completion.boundary_dual_graph(gamma)
    dot = completion.to_dot(cfg)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(dot)
    for c in cfg.curves:
        nb = " ".join(cfg.neighbours(c.name))
        out.write(f"{c.name}: s={c.self_intersection}; meets {nb}\n")
    out.write(f"minimal: {_bool(completion.is_minimal_completion(cfg))}\n")
    return 0


def cmd_factor(args, out) -> int:
    source, target = _load(args.source), _load(args.target)
    leaf_images = parse_map_file(_read(args.map))
    phi = labelled.glue_morphisms(source, target, leaf_images)
    fac = labelled.factor_morphism(phi)
    for k, (node, tau) in enumerate(fac.blow_downs, start=1):
        kids = tau.source.shape.children[node]
        out.write(f"blow-down {k}: collapse {' '.join(kids)} onto {node}\n")
    emb = fac.embedding
    pairs = ", ".join(f"{k}->{emb.node_map[k]}" for k in emb.source.shape.nodes)
    out.write(f"embedding: {pairs}\n")
    return 0


def cmd_from_metric(args, out) -> int:
    u = parse_metric_file(_read(args.metric))
    gamma = labelled.build_from_ultrametric(u)
    out.write(serialize_cochain(gamma))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dfsurf", description="Danielewski surfaces from labelled trees")
    p.add_argument("--exit-code", action="store_true", help="exit 1 on negative answers")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="parse and validate a tree file")
    s.add_argument("tree")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("essentialize", help="print the essential tree and the split c, m")
    s.add_argument("tree")
    s.set_defaults(func=cmd_essentialize)

    s = sub.add_parser("equiv", help="decide equivalence of two labelled trees")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--strict-constant-b", action="store_true")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("ml", help="Makar-Limanov triviality by both tests")
    s.add_argument("tree")
    s.set_defaults(func=cmd_ml)

    s = sub.add_parser("comb", help="equations of the comb surface from a polynomial list")
    s.add_argument("spec")
    s.add_argument("--tree-only", action="store_true")
    s.set_defaults(func=cmd_comb)

    s = sub.add_parser("equations", help="equations of a broom surface")
    s.add_argument("tree")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_equations)

    s = sub.add_parser("gluing", help="chart data and transition functions")
    s.add_argument("tree")
    s.set_defaults(func=cmd_gluing)

    s = sub.add_parser("boundary", help="boundary dual graph of the completion")
    s.add_argument("tree")
    s.add_argument("--dot", metavar="FILE")
    s.set_defaults(func=cmd_boundary)

    s = sub.add_parser("factor", help="factor a morphism into blow-downs and an embedding")
    s.add_argument("source")
    s.add_argument("target")
    s.add_argument("map")
    s.set_defaults(func=cmd_factor)

    s = sub.add_parser("from-metric", help="build a tree from ultrametric data")
    s.add_argument("metric")
    s.set_defaults(func=cmd_from_metric)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (ValueError, KeyError, ArithmeticError, OSError) as exc:
        err.write(f"{type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
