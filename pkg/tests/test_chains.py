import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from homotopy_trees import ombas
from homotopy_trees.chains import (
    Chain,
    DegreeError,
    GradedComplex,
    SparseMatrix,
    chain_from_dict,
    chain_to_dict,
    d_squared_is_zero,
    homology,
    is_point_homology,
    smith_normal_form,
)
from homotopy_trees.trees import corolla, enumerate_stable_trees, parse_word


def test_chain_arithmetic_drops_zeros():
    a = Chain({"x": 2, "y": -1}, 0)
    b = Chain({"x": -2}, 0)
    s = a + b
    assert s.terms == {"y": -1}
    assert (a - a).terms == {} and not (a - a)
    assert (a * -3)["x"] == -6
    assert -a == a * -1


def test_chain_rejects_mixed_degrees():
    with pytest.raises(DegreeError):
        Chain({"x": 1}, 0) + Chain({"y": 1}, 1)
    with pytest.raises(DegreeError):
        Chain.from_terms([("x", 1), ("yy", 1)], degree_of=len)


def test_zero_chain_adds_to_anything():
    a = Chain({"x": 1}, 3)
    assert (Chain() + a) == a and (a + Chain()).degree == 3


def test_chain_json_round_trip():
    x = ombas.diff_ombas(parse_word("(ab)(cd)"))
    assert chain_from_dict(chain_to_dict(x)) == x


def _sympy_invariants(rows):
    if not rows or not rows[0]:
        return []
    d = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    return sorted(abs(int(d[i, i])) for i in range(min(d.shape)) if d[i, i] != 0)


@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_smith_form_matches_sympy(r, c, seed):
    rng = random.Random(seed)
    m = [[rng.choice([0, 0, 1, -1, 2, 3, -4]) for _ in range(c)] for _ in range(r)]
    ours = sorted(smith_normal_form(m).invariants)
    assert ours == _sympy_invariants(m)


def test_smith_form_divisibility_chain():
    d = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).invariants
    assert d == [2, 6, 12]


def test_smith_form_invariant_under_basis_permutation():
    rng = random.Random(3)
    for _ in range(20):
        m = [[rng.randint(-3, 3) for _ in range(5)] for _ in range(4)]
        base = smith_normal_form(m).invariants
        rows = list(range(4))
        cols = list(range(5))
        rng.shuffle(rows)
        rng.shuffle(cols)
        perm = [[m[i][j] for j in cols] for i in rows]
        assert smith_normal_form(perm).invariants == base


def test_sparse_matrix_product_check():
    a = SparseMatrix.from_dense([[1, -1]])
    b = SparseMatrix.from_dense([[1], [1]])
    assert a.matmul_is_zero(b)
    assert a.dense() == [[1, -1]]


def test_homology_of_a_point():
    c = GradedComplex.from_differential({0: ["pt"]}, lambda x: Chain())
    assert homology(c) == {0: (1, [])}
    assert is_point_homology(homology(c))


def test_homology_of_projective_plane_has_two_torsion():
    # cellular cochains of RP^2: one cell per dimension, coboundaries 0 and 2
    diff = {"e0": Chain(), "e1": Chain({"e2": 2}, 2), "e2": Chain()}
    c = GradedComplex.from_differential({0: ["e0"], 1: ["e1"], 2: ["e2"]}, diff.__getitem__)
    assert homology(c) == {0: (1, []), 1: (0, []), 2: (0, [2])}


def test_homology_of_circle():
    # two vertices, two edges: coboundary rows e_a, e_b
    diff = {"v": Chain({"a": 1, "b": 1}, 1), "w": Chain({"a": -1, "b": -1}, 1), "a": Chain(), "b": Chain()}
    c = GradedComplex.from_differential({0: ["v", "w"], 1: ["a", "b"]}, diff.__getitem__)
    assert homology(c) == {0: (1, []), 1: (1, [])}
    assert c.euler_characteristic() == 0


def test_non_complex_is_rejected():
    diff = {"x": Chain({"y": 1}, 1), "y": Chain({"z": 1}, 2), "z": Chain()}
    c = GradedComplex.from_differential({0: ["x"], 1: ["y"], 2: ["z"]}, diff.__getitem__)
    assert not c.is_complex()
    with pytest.raises(ValueError):
        homology(c)


def test_missing_boundary_key_is_reported():
    with pytest.raises(KeyError):
        GradedComplex.from_differential({0: ["x"], 1: []}, lambda k: Chain({"ghost": 1}))


def test_d_squared_verdicts():
    gens = [t for n in range(2, 5) for t in enumerate_stable_trees(n)]
    v = d_squared_is_zero(ombas.diff_ombas, gens)
    assert v and v.checked == 15
    assert d_squared_is_zero(lambda t: Chain(), gens)

    def corrupted(t):
        x = ombas.diff_ombas(t)
        if t == corolla(3):
            return x
        if t.n_finite == 2:
            # flip one collapse sign
            k, c = x.sorted_items()[0]
            return x - Chain({k: 2 * c}, x.degree)
        return x

    bad = d_squared_is_zero(corrupted, gens)
    assert not bad and bad.witness is not None and bad.witness.n_finite == 2
    assert bad.line().startswith("FAIL")


def test_complex_export_is_json_ready():
    import json

    basis = {}
    for x in ombas.broken_trees(3):
        basis.setdefault(ombas.degree(x), []).append(x)
    c = GradedComplex.from_differential(basis, ombas.diff_ombas)
    json.dumps(c.to_dict())
