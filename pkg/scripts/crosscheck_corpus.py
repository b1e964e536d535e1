"""Cross-check the two ML tests, the ODS criterion and the blow-up replay on random trees.

    python scripts/crosscheck_corpus.py --n 500 --seed 3 [--dump DIR]

With --dump every tree is also written as a cochain file, so the CLI can be
exercised on the same corpus.
"""
import argparse
import random
from collections import Counter
from pathlib import Path

from dfsurf import generate
from dfsurf.cli import serialize_cochain
from dfsurf.completion import boundary_dual_graph, is_minimal_completion, ml_via_boundary, simulate_completion
from dfsurf.surface import canonical_sheaf_trivial, ml_trivial, ods_characterization


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-leaves", type=int, default=12)
    ap.add_argument("--max-height", type=int, default=6)
    ap.add_argument("--dump", type=Path)
    args = ap.parse_args()

    cfg = generate.TreeConfig(max_leaves=args.max_leaves, max_height=args.max_height)
    rng = random.Random(args.seed)
    tally = Counter()
    if args.dump:
        args.dump.mkdir(parents=True, exist_ok=True)
    for k in range(args.n):
        g = generate.random_labelled_tree(rng, cfg)
        ml = ml_trivial(g)
        tally["ml-trivial" if ml else "ml-nontrivial"] += 1
        tally["ml disagree"] += ml != ml_via_boundary(g)
        tally["ods disagree"] += ods_characterization(g) != (ml and canonical_sheaf_trivial(g))
        closed = boundary_dual_graph(g)
        tally["replay disagree"] += not simulate_completion(g).boundary().same_as(closed)
        tally["not minimal"] += not is_minimal_completion(closed)
        if args.dump:
            (args.dump / f"tree{k:04d}.dft").write_text(serialize_cochain(g))
    for key in sorted(tally):
        print(f"{key:>16}: {tally[key]}")


if __name__ == "__main__":
    main()
