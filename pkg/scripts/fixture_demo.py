"""Print the worked fixtures: brooms, the three-variable comb, gamma_t and a fork boundary."""
from dfsurf.completion import boundary_dual_graph, to_dot
from dfsurf.exactalg import Poly
from dfsurf.labelled import LabelledTree, decide_equivalence
from dfsurf.surface import CombSpec, descriptor, emit_broom_equations, emit_comb_equations
from dfsurf.trees import RootedTree, broom


def brooms():
    for j in (1, 2, 3):
        g = LabelledTree(broom(0, j, 2), {f"b1_{j}": Poly([1]), f"b2_{j}": Poly([-1])})
        system = emit_broom_equations(g)
        print(f"broom j={j}: {system.relations[0].to_text()} = 0, "
              f"g12 = {descriptor(g).transition[0][1]}, verified {system.verify()}")


def comb():
    system, _ = emit_comb_equations(CombSpec(((1, 0, -1), (1, -1)), (0, 1)))
    named = system.renamed({"X0": "x", "X1": "y", "X2": "z", "X3": "u"})
    for r in named.relations:
        print(f"comb: {r.to_text()} = 0")
    print(f"comb verified {system.verify()}")


def gamma_t():
    shape = RootedTree("r", [("r", "a"), ("a", "a1"), ("r", "b")])
    trees = {t: LabelledTree(shape, {"a1": Poly([1, t]), "b": Poly()}) for t in range(3)}
    for s in range(3):
        for t in range(s + 1, 3):
            lit = decide_equivalence(trees[s], trees[t])
            strict = decide_equivalence(trees[s], trees[t], strict_constant_b=True)
            lit_txt = "none" if lit is None else f"a={lit.a}, b={lit.b.to_text()}"
            print(f"gamma_{s} vs gamma_{t}: literal {lit_txt}; constant b: "
                  f"{'equivalent' if strict else 'not equivalent'}")


def fork():
    g = LabelledTree(
        RootedTree("r", [("r", "a"), ("a", "a1"), ("a", "a2"), ("r", "b"), ("b", "b1"), ("b", "b2")]),
        {"a1": Poly([0, 1]), "a2": Poly([0, -1]), "b1": Poly([1, 1]), "b2": Poly([1, -1])})
    print(to_dot(boundary_dual_graph(g), "fork"), end="")


if __name__ == "__main__":
    brooms()
    comb()
    gamma_t()
    fork()
