import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from homotopy_trees import cones
from homotopy_trees.cones import EQ, GE, GT, Constraint
from homotopy_trees.trees import TRIVIAL, enumerate_gauged_trees, enumerate_stable_trees, parse_gauged, parse_word

import oracles


def test_dimension_counts_free_lengths_and_the_gauge():
    assert cones.cone_dimension(TRIVIAL) == 1
    assert cones.cone_dimension(parse_gauged("ab:O")) == 0
    assert cones.cone_dimension(parse_gauged("ab:B")) == 1
    assert cones.cone_dimension(parse_gauged("(ab)c:BA")) == 2
    assert cones.cone_dimension(parse_gauged("(ab)(cd):BOO")) == 1


def test_dimensions_up_to_four():
    assert cones.check_dimensions(4)


def test_strata_up_to_four():
    assert cones.check_strata(4)


def test_partition_up_to_four():
    v = cones.check_partition(4, samples=150, seed=1)
    assert v and v.checked == 150 * sum(len(enumerate_stable_trees(n)) for n in range(2, 5))


def test_trivial_cell_has_no_boundary():
    assert cones.boundary_strata(TRIVIAL) == []
    assert not cones.strata_chain(TRIVIAL)


def test_double_on_cell_has_two_strata():
    strata = cones.boundary_strata(parse_gauged("(ab)(cd):BOO"))
    assert sorted(s.kind for s in strata) == ["below-break", "int-collapse"]


def test_classify_point():
    t = parse_word("(ab)c")
    tg, on = cones.classify_point(t, Fraction(-1, 2), [1])
    assert tg == parse_gauged("(ab)c:BA") and not on
    tg, on = cones.classify_point(t, -1, [1])
    assert tg == parse_gauged("(ab)c:BO") and on
    tg, _ = cones.classify_point(t, 1, [1])
    assert tg == parse_gauged("(ab)c:AA")
    tg, _ = cones.classify_point(t, -5, [1])
    assert tg == parse_gauged("(ab)c:BB")


@pytest.mark.parametrize("lengths", [[], [1, 1], [0], [-1]])
def test_classify_point_rejects_bad_lengths(lengths):
    with pytest.raises(ValueError):
        cones.classify_point(parse_word("(ab)c"), 0, lengths)


def test_contains_distinguishes_boundary():
    c = cones.cone_system(parse_gauged("(ab)c:BA"))
    assert c.contains((Fraction(-1, 2), 1)) == "inside"
    assert c.contains((Fraction(-1), 1)) == "boundary"
    assert c.contains((Fraction(-2), 1)) == "outside"
    json.dumps(c.to_dict())


@given(st.integers(2, 4).flatmap(lambda n: st.sampled_from(enumerate_stable_trees(n))), st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_classified_cell_contains_its_point(t, seed):
    rng = random.Random(seed)
    lam = Fraction(rng.randint(-20, 4), rng.randint(1, 3))
    lengths = [Fraction(rng.randint(1, 6), rng.randint(1, 3)) for _ in range(t.n_edges)]
    tg, _ = cones.classify_point(t, lam, lengths)
    assert cones.cone_system(tg).contains((lam, *lengths)) == "inside"


def _random_rows(rng, n, m):
    rows = []
    for _ in range(m):
        coeffs = tuple(rng.randint(-3, 3) for _ in range(n))
        rows.append(Constraint(coeffs, Fraction(rng.randint(-5, 5)), rng.choice([GT, GT, GE, EQ])))
    return rows


@given(st.integers(1, 2), st.integers(1, 5), st.integers(0, 10**6))
@settings(max_examples=150, deadline=None)
def test_elimination_agrees_with_linear_programming(n, m, seed):
    rows = _random_rows(random.Random(seed), n, m)
    ref = oracles.lp_feasible([(r.coeffs, r.const, r.rel) for r in rows], n)
    x = cones.find_point(rows, n)
    assert (x is not None) == ref
    if x is not None:
        assert all(r.status(x) == "sat" for r in rows)


def test_elimination_handles_strictness():
    x_pos = Constraint((1,), Fraction(0), GT)
    x_neg = Constraint((-1,), Fraction(0), GE)
    assert not cones.feasible([x_pos, x_neg], 1)
    assert cones.feasible([x_pos.relaxed(), x_neg], 1)
    assert cones.find_point([Constraint((0,), Fraction(1), EQ)], 1) is None


def test_every_cell_has_an_interior_point():
    for n in range(1, 5):
        for tg in enumerate_gauged_trees(n):
            x = cones.cone_system(tg).interior_point()
            assert x is not None and cones.cone_system(tg).contains(x) == "inside"
