import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given

from dfsurf.cli import (
    SyntaxError as TreeSyntaxError,
    ValidationError,
    main,
    parse_metric_file,
    parse_tree_file,
    serialize_cochain,
    serialize_weighted,
)
from dfsurf.exactalg import Poly
from dfsurf.labelled import reduce

from strategies import labelled_trees

HERE = Path(__file__).parent
FIX = "fixtures"

GOLDEN = [
    ("validate_fork.txt", ["validate", f"{FIX}/fork.dft"]),
    ("essentialize_broom2.txt", ["essentialize", f"{FIX}/broom2.dft"]),
    ("equiv_fork.txt", ["equiv", f"{FIX}/fork.dft", f"{FIX}/fork_moved.dft"]),
    ("equiv_strict_t0_t1.txt", ["equiv", "--strict-constant-b", f"{FIX}/gamma_t0.dft", f"{FIX}/gamma_t1.dft"]),
    ("equiv_literal_t0_t1.txt", ["equiv", f"{FIX}/gamma_t0.dft", f"{FIX}/gamma_t1.dft"]),
    ("ml_fork.txt", ["ml", f"{FIX}/fork.dft"]),
    ("ml_gamma_t2.txt", ["ml", f"{FIX}/gamma_t2.dft"]),
    ("comb_bml.json", ["comb", f"{FIX}/bml.comb"]),
    ("equations_broom2.json", ["equations", "--json", f"{FIX}/broom2.dft"]),
    ("gluing_gamma_t2.txt", ["gluing", f"{FIX}/gamma_t2.dft"]),
    ("factor_fork.txt", ["factor", f"{FIX}/fork.dft", f"{FIX}/fork_down.dft", f"{FIX}/fork.map"]),
    ("from_metric.txt", ["from-metric", f"{FIX}/metric.txt"]),
]


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    cwd = os.getcwd()
    os.chdir(HERE)
    try:
        code = main(argv, out, err)
    finally:
        os.chdir(cwd)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name,argv", GOLDEN, ids=[g[0] for g in GOLDEN])
def test_golden(name, argv):
    code, out, err = run(argv)
    assert code == 0 and err == ""
    assert out == (HERE / "golden" / name).read_text()
    assert run(argv)[1] == out  # byte-identical on a second run


def test_boundary_dot_golden(tmp_path):
    dot = tmp_path / "b.dot"
    code, out, _ = run(["boundary", "--dot", str(dot), f"{FIX}/fork.dft"])
    assert code == 0
    assert out == (HERE / "golden" / "boundary_fork.txt").read_text()
    assert dot.read_text() == (HERE / "golden" / "boundary_fork.dot").read_text()


def test_equations_json_schema():
    code, out, _ = run(["equations", "--json", f"{FIX}/broom2.dft"])
    data = json.loads(out)
    assert set(data) == {"variables", "relations", "charts", "morphism"}
    assert data["relations"] == ["x^2*z - y^2 + 1"]


def test_exit_codes():
    code, out, _ = run(["--exit-code", "equiv", "--strict-constant-b", f"{FIX}/gamma_t0.dft", f"{FIX}/gamma_t1.dft"])
    assert code == 1 and out == "not equivalent\n"
    assert run(["--exit-code", "ml", f"{FIX}/fork.dft"])[0] == 1
    assert run(["--exit-code", "ml", f"{FIX}/gamma_t2.dft"])[0] == 0
    code, out, err = run(["validate", f"{FIX}/missing.dft"])
    assert code == 2 and err.startswith("FileNotFoundError")
    code, _, err = run(["equations", f"{FIX}/fork.dft"])
    assert code == 2 and err.startswith("NotABroom")


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "dfsurf.cli", "ml", str(HERE / FIX / "gamma_t2.dft")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "ML-trivial: true (comb test), true (boundary chain test)\n"


# -- parsing -----------------------------------------------------------------


def test_parse_weighted_broom():
    g = parse_tree_file("root r; edge r a 1; edge r b -1")
    assert g.sigma == {"a": Poly([1]), "b": Poly([-1])}


def test_parse_cochain_gamma_t():
    g = parse_tree_file("root r; edge r a; edge a a1; leaf a1 sigma 1+2*x; edge r b; leaf b sigma 0")
    assert g.sigma == {"a1": Poly([1, 2]), "b": Poly()}
    assert g.shape.children["r"] == ("a", "b")


def test_fine_condition_error():
    with pytest.raises(ValidationError) as info:
        parse_tree_file("root r; edge r a 1; edge r b 1")
    assert info.value.violations[0].kind == "fine"


def test_compatibility_error():
    with pytest.raises(ValidationError):
        parse_tree_file("format cochain\nroot r\nedge r a\nleaf a sigma x\nedge r b\nleaf b sigma 0")


@pytest.mark.parametrize("text,line", [
    ("root r\nedge r\n", 2),
    ("format weighted\nroot r\nedge r a\n", 3),
    ("root r\nleaf a sigma 1 +\n", 2),
    ("root r\nfrobnicate\n", 2),
    ("root r; root s", 1),
])
def test_syntax_errors(text, line):
    with pytest.raises(TreeSyntaxError) as info:
        parse_tree_file(text)
    assert info.value.line == line


def test_comments_and_blank_lines():
    g = parse_tree_file("# header\n\nroot r   # the root\nedge r a 1 ; edge r b 2\n")
    assert g.shape.leaves() == ["a", "b"]


def test_metric_file():
    u = parse_metric_file((HERE / FIX / "metric.txt").read_text())
    assert u.m == (2, 2, 1) and u.d[0][1] == 1


@given(labelled_trees)
def test_cochain_round_trip(gamma):
    text = serialize_cochain(gamma)
    again = parse_tree_file(text)
    assert again == gamma
    assert serialize_cochain(again) == text


@given(labelled_trees)
def test_weighted_round_trip(gamma):
    text = serialize_weighted(gamma)
    again = parse_tree_file(text)
    assert again == reduce(gamma)
    assert serialize_weighted(again) == text
