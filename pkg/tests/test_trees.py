import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from homotopy_trees.trees import (
    LEAF,
    TRIVIAL,
    Block,
    BrokenGaugedTree,
    GaugedTree,
    Orientation,
    RibbonTree,
    Side,
    break_edge,
    canonical_orientation,
    collapse_edge,
    corolla,
    dumps,
    enumerate_binary_trees,
    enumerate_cbrt,
    enumerate_gauged_trees,
    enumerate_stable_trees,
    gauged_tamari_path_independent,
    graft,
    left_comb,
    loads,
    parse_gauged,
    parse_word,
    permutation_parity,
    right_comb,
    splice_sign,
    to_text,
    tamari_covers,
    tamari_path_independent,
    tree_from_dict,
    tree_to_dict,
)

import oracles


@pytest.mark.parametrize("n", range(2, 8))
def test_stable_count_matches_schroeder_recurrence(n):
    assert len(enumerate_stable_trees(n)) == oracles.little_schroeder(n)


@pytest.mark.parametrize("n", range(2, 8))
def test_binary_count_is_catalan(n):
    assert len(enumerate_binary_trees(n)) == oracles.catalan(n - 1)


def test_stable_enumeration_matches_nested_lists():
    for n in range(2, 6):
        ours = sorted(t.word() for t in enumerate_stable_trees(n))
        ref = sorted(oracles.word_of(x) for x in oracles.nested_stable(n))
        assert ours == ref


def test_generators_up_to_six_number_257():
    # the five little Schroeder numbers 1, 3, 11, 45, 197
    assert sum(len(enumerate_stable_trees(n)) for n in range(2, 7)) == 257


def test_four_binary_trees_of_arity_four():
    words = {t.word() for t in enumerate_binary_trees(4)}
    assert words == {"((ab)c)d", "(a(bc))d", "(ab)(cd)", "a((bc)d)", "a(b(cd))"}


@pytest.mark.parametrize("n", range(1, 5))
def test_gauged_count_matches_brute_force(n):
    assert len(enumerate_gauged_trees(n)) == oracles.brute_gauged_count(n)


def test_gauged_binary_counts():
    # painted binary trees: 1, 2, 6, 21, 80
    assert [len(enumerate_cbrt(n)) for n in range(1, 6)] == [1, 2, 6, 21, 80]


def test_enumeration_is_sorted_and_duplicate_free():
    for n in range(2, 6):
        ts = enumerate_stable_trees(n)
        assert ts == sorted(ts) and len(set(ts)) == len(ts)
        gs = enumerate_gauged_trees(n)
        assert len(set(gs)) == len(gs)


def test_arity_one_needs_the_trivial_tree():
    with pytest.raises(ValueError):
        enumerate_stable_trees(1)
    assert enumerate_gauged_trees(1) == [TRIVIAL]


def test_collapse_merges_vertices():
    t = parse_word("(ab)c")
    assert collapse_edge(t, 0) == corolla(3)
    assert collapse_edge(parse_word("a(b(cd))"), 1) == parse_word("a(bcd)")


def test_collapse_rejects_broken_and_out_of_range():
    t = break_edge(parse_word("(ab)c"), 0)
    with pytest.raises(ValueError):
        collapse_edge(t, 0)
    with pytest.raises(IndexError):
        collapse_edge(parse_word("(ab)c"), 1)


def test_break_keeps_shape():
    t = break_edge(parse_word("(ab)(cd)"), 1)
    assert t.word() == "(ab)|(cd)"
    assert t.broken_edges() == [1] and t.finite_edges() == [0]
    assert len(t.components()) == 2


def test_events_trace():
    assert parse_word("(ab)c").events() == "ELLL"
    assert break_edge(parse_word("(ab)c"), 0).events() == "LLL"
    assert LEAF.events() == "L"


def test_split_root_hangs_broken_subtrees():
    t = break_edge(parse_word("a((bc)d)"), 0)
    top, hanging = t.split_root()
    assert top == corolla(2)
    assert hanging[0] is None and hanging[1] == parse_word("(bc)d")


def test_graft_adds_a_broken_edge():
    t = graft(corolla(2), 1, corolla(2))
    assert t.word() == "a|(bc)" and t.arity == 3 and t.n_finite == 0


def test_combs():
    assert left_comb(4).word() == "((ab)c)d"
    assert right_comb(4).word() == "a(b(cd))"


def test_permutation_parity():
    assert permutation_parity([0, 1, 2]) == 1
    assert permutation_parity([1, 0, 2]) == -1
    assert permutation_parity([2, 0, 1]) == 1


def _nested(t):
    return None if t.is_leaf else [_nested(c) for c in t.children]


def test_splice_sign_matches_relabeling_oracle():
    for n in range(2, 5):
        for m in range(2, 4):
            for a in enumerate_stable_trees(n):
                for b in enumerate_stable_trees(m):
                    for i in range(n):
                        inner = [None] * n
                        inner[i] = b.events()
                        sign, _ = splice_sign(a.events(), inner)
                        assert sign == oracles.graft_sign(_nested(a), i, _nested(b)), (a.word(), i, b.word())


def test_splice_trace_is_the_glued_trace():
    a, b = parse_word("a(bc)"), parse_word("(ab)c")
    inner = [None, b.events(), None]
    _, trace = splice_sign(a.events(), inner)
    assert trace == graft(a, 1, b).events()


def test_orientation_from_ordering():
    assert Orientation.from_ordering([1, 0]) == -Orientation(2)
    assert Orientation.from_ordering([0, 1, 2]).sign == 1
    with pytest.raises(ValueError):
        Orientation.from_ordering([0, 0])


@pytest.mark.parametrize("n", range(2, 6))
def test_tamari_orientations_are_path_independent(n):
    assert tamari_path_independent(n)


@pytest.mark.parametrize("n", range(1, 5))
def test_gauged_tamari_orientations_are_path_independent(n):
    assert gauged_tamari_path_independent(n)


def test_canonical_orientation_of_binary_trees():
    for t in enumerate_binary_trees(4):
        o = canonical_orientation(t)
        assert o.n == 2 and o.sign in (1, -1)


def test_tamari_covers_go_from_right_comb_to_left_comb():
    assert [t.word() for t, _ in tamari_covers(right_comb(3))] == ["(ab)c"]
    assert tamari_covers(left_comb(3)) == []
    # the five-tree pentagon has five cover relations
    assert sum(len(tamari_covers(t)) for t in enumerate_binary_trees(4)) == 5


def test_gauged_labels_are_validated():
    t = parse_word("(ab)c")
    GaugedTree(t, [Side.BELOW, Side.ON])
    with pytest.raises(ValueError):
        GaugedTree(t, [Side.ON, Side.ON])
    with pytest.raises(ValueError):
        GaugedTree(t, [Side.ABOVE, Side.BELOW])
    with pytest.raises(ValueError):
        GaugedTree(t, [Side.ON])


def test_gauged_degree():
    # ON vertices minus edges minus one
    assert parse_gauged("abc:O").degree == 0
    assert parse_gauged("(ab)c:BO").degree == -1
    assert parse_gauged("(ab)c:AA").degree == -2
    assert TRIVIAL.degree == 0


def test_crossed_edges():
    assert parse_gauged("(ab)c:BA").crossed_edges() == [0]
    assert parse_gauged("(ab)c:BO").crossed_edges() == []


def test_broken_gauged_tree_degree_and_validation():
    y = BrokenGaugedTree(corolla(2), [Block(TRIVIAL), Block(TRIVIAL)])
    assert y.degree == 0 and y.arity == 2
    z = BrokenGaugedTree(corolla(2), [Block(parse_gauged("ab:A")), Block(TRIVIAL)])
    assert z.degree == -1
    with pytest.raises(ValueError):
        BrokenGaugedTree(corolla(3), [Block(TRIVIAL)])
    with pytest.raises(ValueError):
        BrokenGaugedTree(None, [Block(TRIVIAL), Block(TRIVIAL)])


def test_block_tops_must_match_leaves():
    g = parse_gauged("ab:O")
    b = Block(g, [corolla(2), LEAF])
    assert b.arity == 3
    with pytest.raises(ValueError):
        Block(g, [corolla(2)])


def _all_keys():
    keys = [t for n in range(2, 5) for t in enumerate_stable_trees(n)]
    keys += [break_edge(t, 0) for t in keys if t.n_edges]
    keys += [g for n in range(1, 4) for g in enumerate_gauged_trees(n)]
    keys.append(BrokenGaugedTree(corolla(2), [Block(TRIVIAL), Block(parse_gauged("ab:O"), [LEAF, corolla(2)])]))
    return keys


def test_json_round_trip():
    for k in _all_keys():
        assert loads(dumps(k)) == k
        assert tree_from_dict(json.loads(json.dumps(tree_to_dict(k)))) == k


def test_json_rejects_unknown_types():
    with pytest.raises(ValueError):
        tree_from_dict({"type": "forest"})
    with pytest.raises(TypeError):
        tree_to_dict(3)


def test_word_parser_round_trip():
    for t in _all_keys():
        if isinstance(t, RibbonTree):
            assert parse_word(t.word()) == t
        elif isinstance(t, GaugedTree) and not t.is_trivial:
            assert parse_gauged(f"{t.tree.word()}:{t.label_string()}") == t


def test_text_form_round_trips_through_the_parsers():
    for n in range(1, 5):
        for g in enumerate_gauged_trees(n):
            assert parse_gauged(to_text(g)) == g
    y = BrokenGaugedTree(corolla(2), [Block(TRIVIAL), Block(parse_gauged("ab:O"), [LEAF, corolla(2)])])
    assert to_text(y) == "ab[TRIVIAL, ab:O<a, ab>]"


@pytest.mark.parametrize("bad", ["(ab", "ab)", "(a)b", "a+b"])
def test_word_parser_errors(bad):
    with pytest.raises(ValueError):
        parse_word(bad)


trees_strategy = st.integers(2, 6).flatmap(lambda n: st.sampled_from(enumerate_stable_trees(n)))


@given(trees_strategy)
@settings(max_examples=60, deadline=None)
def test_collapse_keeps_order_of_other_edges(t):
    # edge p is the (p+1)-th vertex in preorder; removing it shifts later indices by one
    for p in range(t.n_edges):
        u = collapse_edge(t, p)
        assert u.arity == t.arity and u.n_edges == t.n_edges - 1 and u.is_stable()


@given(trees_strategy, st.data())
@settings(max_examples=60, deadline=None)
def test_break_then_components_partition_leaves(t, data):
    if not t.n_edges:
        return
    p = data.draw(st.integers(0, t.n_edges - 1))
    u = break_edge(t, p)
    comps = u.components()
    assert len(comps) == 2
    # leaves of components: each component counts hanging subtrees as one leaf
    assert sum(c.arity for c in comps) == t.arity + 1


@given(st.lists(st.integers(0, 20), min_size=1, max_size=7, unique=True))
def test_parity_is_a_homomorphism_on_transpositions(seq):
    for i, j in itertools.combinations(range(len(seq)), 2):
        swapped = list(seq)
        swapped[i], swapped[j] = swapped[j], swapped[i]
        assert permutation_parity(swapped) == -permutation_parity(seq)
