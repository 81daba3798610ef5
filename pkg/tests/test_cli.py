import json
import subprocess
import sys

import numpy as np
import pytest

from homotopy_trees import evaluator as ev
from homotopy_trees.cli import THREADS_ENV, run


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate_binary_trees(capsys):
    code, out, _ = _run(capsys, "trees", "enum", "--kind", "binary", "-n", "4")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "# 5 trees" and len(lines) == 6


def test_enumerate_gauged_trees_json(capsys):
    code, out, _ = _run(capsys, "trees", "enum", "--kind", "gauged", "-n", "3", "--json")
    assert code == 0 and json.loads(out)["count"] == 13


def test_differentials_print_in_parseable_form(capsys):
    assert _run(capsys, "ombas", "diff", "--tree", "(ab)c")[1].strip() == "- abc + |(ab)c"
    assert _run(capsys, "ombas", "diff", "--gauged", "ab:B")[1].strip() == "ab:O - ab[TRIVIAL, TRIVIAL]"
    assert _run(capsys, "ombas", "diff", "--gauged", "ab:O")[1].strip() == "0"


def test_differential_needs_exactly_one_tree(capsys):
    code, _, err = _run(capsys, "ombas", "diff")
    assert code == 2 and "exactly one" in err
    assert _run(capsys, "ombas", "diff", "--tree", "ab", "--gauged", "ab:O")[0] == 2


def test_ainf_equation(capsys):
    code, out, _ = _run(capsys, "ainf", "diff", "-n", "3")
    assert code == 0 and out.strip() == "m2(id⊗m2) - m2(m2⊗id)"
    code, out, _ = _run(capsys, "ainf", "diff", "-n", "2", "--morph")
    assert out.strip() == "f1(m2) - m2(f1⊗f1)"


def test_polytope_vertices(capsys):
    code, out, _ = _run(capsys, "poly", "vertices", "--kind", "assoc", "-w", "1,1,1")
    assert code == 0 and out.strip() == "(1,2) (2,1)"
    code, out, _ = _run(capsys, "poly", "vertices", "--kind", "J", "-n", "3")
    assert len(out.split()) == 6


def test_polytope_build_json(capsys):
    code, out, _ = _run(capsys, "poly", "build", "--kind", "K", "-n", "4", "--json")
    d = json.loads(out)
    assert code == 0 and len(d["vertices"]) == 5 and d["weights"] == ["1"] * 4


def test_polytope_bad_weights(capsys):
    assert _run(capsys, "poly", "build", "-w", "1,0,1")[0] == 2
    assert _run(capsys, "poly", "build", "-w", "1,1", "-n", "2")[0] == 2


def test_classify_with_negative_gauge(capsys):
    code, out, _ = _run(capsys, "cones", "classify", "--tree", "(ab)c", "--lam", "-1/2", "--lengths", "1")
    assert code == 0 and out.strip() == "(ab)c:BA"
    code, out, _ = _run(capsys, "cones", "classify", "--tree", "(ab)c", "--lam", "-1", "--lengths", "1")
    assert out.strip() == "(ab)c:BO (on a gauge wall)"


@pytest.mark.parametrize("lam,lengths", [("1/x", "1"), ("1/0", "1"), ("0", "0"), ("0", "1,1")])
def test_classify_rejects_bad_input(capsys, lam, lengths):
    assert _run(capsys, "cones", "classify", "--tree", "(ab)c", "--lam", lam, "--lengths", lengths)[0] == 2


def test_bad_tree_word(capsys):
    assert _run(capsys, "ombas", "diff", "--tree", "(ab")[0] == 2


def test_unknown_subcommand(capsys):
    assert _run(capsys, "trees", "grow")[0] == 2
    assert _run(capsys)[0] == 2


def test_out_of_range_arity(capsys):
    assert _run(capsys, "trees", "enum", "-n", "40")[0] == 2


def test_d_squared_commands(capsys):
    code, out, _ = _run(capsys, "ombas", "dsq", "--max-arity", "4")
    assert code == 0 and out.startswith("PASS")
    code, out, _ = _run(capsys, "ombas", "dsq", "--max-arity", "3", "--morph", "--json")
    assert code == 0 and json.loads(out)["ok"] is True


def test_eval_check_on_saved_instances(capsys, tmp_path):
    module, mult = ev.matrix_algebra_module()
    alg = ev.associative_instance(module, mult, 3)
    good = tmp_path / "good.json"
    ev.save_instance(alg, str(good))
    assert _run(capsys, "eval", "check", str(good))[0] == 0

    bad = ev.algebra_map_instance(alg, alg, np.eye(3), 3, sign=-1)
    path = tmp_path / "bad.json"
    ev.save_instance(bad, str(path))
    code, out, _ = _run(capsys, "eval", "check", str(path))
    assert code == 1 and "FAIL" in out


def test_eval_check_file_errors(capsys, tmp_path):
    assert _run(capsys, "eval", "check", str(tmp_path / "missing.json"))[0] == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert _run(capsys, "eval", "check", str(broken))[0] == 2


def test_verify_all_small(capsys):
    code, out, _ = _run(capsys, "verify", "all", "--max-arity", "3")
    assert code == 0 and out.strip().endswith("all checks passed")


def test_verify_all_json(capsys):
    code, out, _ = _run(capsys, "verify", "all", "--max-arity", "2", "--json")
    d = json.loads(out)
    assert code == 0 and all(c["ok"] for c in d["checks"])


def test_threads_must_be_an_integer(capsys, monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "many")
    assert _run(capsys, "verify", "all", "--max-arity", "2")[0] == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "homotopy_trees", "ainf", "diff", "-n", "3"], capture_output=True, text=True)
    assert r.returncode == 0 and "m2(id⊗m2)" in r.stdout
