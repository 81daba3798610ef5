"""The operad of broken ribbon trees and its bimodule of gauged trees.

Every basis element is a tree paired with its canonical orientation: the
wedge of its finite edges in depth-first order.  Orientation changes are
folded into integer coefficients, so a chain is simply a dict from trees to
integers.

Sign conventions
----------------
* Degrees: ``-(finite edges)`` for operad elements and
  ``ON vertices - finite edges - nontrivial gauges`` for bimodule elements.
  Differentials raise the degree by one.
* Partial composition and the right action concatenate orientations.
* The left action ``mu(t; x_1, ..., x_k)`` concatenates orientations and
  multiplies by ``(-1)**dagger`` (:func:`dagger`).
* On composite elements the differential is a derivation for these
  structures with the usual Koszul signs.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .chains import Chain
from .trees import (
    LEAF,
    Block,
    BrokenGaugedTree,
    GaugedTree,
    RibbonTree,
    Side,
    TRIVIAL,
    break_edge,
    canonical_orientation,
    canonical_orientation_gauged,
    collapse_edge,
    enumerate_binary_trees,
    enumerate_cbrt,
    enumerate_gauged_trees,
    enumerate_stable_trees,
    gauge_vertex_moves,
    graft,
    graft_all,
    permutation_parity,
    splice_sign,
)


def _events(x) -> str | None:
    if x is None:
        return None
    if isinstance(x, RibbonTree) and x.is_leaf:
        return None
    return x.events()


# operad ----------------------------------------------------------------------

def degree(t: RibbonTree) -> int:
    return -t.n_finite


@lru_cache(maxsize=None)
def diff_ombas(t: RibbonTree) -> Chain:
    """Collapse minus break over the finite edges, canonical orientation."""
    items = []
    for j, p in enumerate(t.finite_edges(), start=1):
        s = -1 if j % 2 else 1
        items.append((collapse_edge(t, p), s))
        items.append((break_edge(t, p), -s))
    return Chain.from_items(items, degree(t) + 1)


def diff_ombas_chain(x: Chain) -> Chain:
    out = Chain(degree=None if x.degree is None else x.degree + 1)
    for t, c in x.items():
        out = out + diff_ombas(t) * c
    return out


def compose_sign(a: RibbonTree, k: int, b: RibbonTree) -> tuple[int, RibbonTree]:
    """Partial composition at leaf ``k`` (0-based) with a broken new edge."""
    inner = [None] * a.arity
    inner[k] = _events(b)
    sign, _ = splice_sign(a.events(), inner)
    return sign, graft(a, k, b, broken=True)


def compose_ombas(a: RibbonTree, k: int, b: RibbonTree) -> Chain:
    sign, t = compose_sign(a, k, b)
    return Chain.basis(t, degree(t), sign)


def compose_all(a: RibbonTree, subs: Sequence[RibbonTree | None]) -> tuple[int, RibbonTree]:
    """Total composition ``a(subs[0], ..., subs[-1])``; ``None`` is the identity."""
    sign, _ = splice_sign(a.events(), [_events(s) for s in subs])
    return sign, graft_all(a, subs, broken=True)


def compose_chains(a: Chain, k: int, b: Chain) -> Chain:
    out = Chain()
    for x, c in a.items():
        for y, d in b.items():
            out = out + compose_ombas(x, k, y) * (c * d)
    return out


def broken_trees(n: int) -> list[RibbonTree]:
    """Every stable tree of arity ``n`` with every subset of edges broken."""
    out = []
    for t in enumerate_stable_trees(n):
        e = t.n_edges
        for mask in range(1 << e):
            u = t
            for p in range(e):
                if mask >> p & 1:
                    u = break_edge(u, p)
            out.append(u)
    return out


# bimodule: degrees and actions -----------------------------------------------

def degree_morph(x: BrokenGaugedTree | GaugedTree) -> int:
    return x.degree if isinstance(x, BrokenGaugedTree) else BrokenGaugedTree.of(x).degree


def _as_broken(x) -> BrokenGaugedTree:
    return x if isinstance(x, BrokenGaugedTree) else BrokenGaugedTree.of(x)


def dagger(t: RibbonTree, xs: Sequence[BrokenGaugedTree]) -> int:
    """Parity of the left-action sign, edge-count form.

    With ``t`` in position 0 carrying no gauge, this is
    ``sum_i g_i * sum_{l<i} e_l + sum_i j_i * sum_{l<i} (e_l + g_l - j_l)``.
    """
    es = [t.n_finite] + [x.n_finite for x in xs]
    gs = [0] + [x.n_gauges for x in xs]
    js = [0] + [x.n_on for x in xs]
    total = 0
    for i in range(1, len(es)):
        total += gs[i] * sum(es[:i])
        total += js[i] * sum(es[l] + gs[l] - js[l] for l in range(i))
    return total % 2


def dagger_by_degrees(t: RibbonTree, xs: Sequence[BrokenGaugedTree]) -> int:
    """The same parity written with degrees of the factors."""
    total = 0
    for i, x in enumerate(xs):
        before_plain = degree(t) + sum(-y.n_finite for y in xs[:i])
        before_gauged = degree(t) + sum(y.degree for y in xs[:i])
        total += x.n_gauges * before_plain + x.n_on * before_gauged
    return total % 2


def _left_graft(t: RibbonTree, xs: Sequence[BrokenGaugedTree]) -> BrokenGaugedTree:
    if t.is_leaf:
        return xs[0]
    bottom = graft_all(t, [x.bottom for x in xs], broken=True)
    return BrokenGaugedTree(bottom, [b for x in xs for b in x.blocks])


def action_left_sign(t: RibbonTree, xs: Sequence) -> tuple[int, BrokenGaugedTree]:
    xs = [_as_broken(x) for x in xs]
    if len(xs) != t.arity:
        raise ValueError(f"left action of an arity-{t.arity} tree needs {t.arity} gauged trees, got {len(xs)}")
    if t.is_leaf:
        return 1, xs[0]
    sign, _ = splice_sign(t.events(), [x.events() for x in xs])
    if dagger(t, xs):
        sign = -sign
    return sign, _left_graft(t, xs)


def action_left(t: RibbonTree, xs: Sequence) -> Chain:
    sign, y = action_left_sign(t, xs)
    return Chain.basis(y, y.degree, sign)


def _right_graft(x: BrokenGaugedTree, i: int, u: RibbonTree) -> BrokenGaugedTree:
    if u.is_leaf:
        return x
    blocks = list(x.blocks)
    for bi, b in enumerate(blocks):
        if i < b.arity:
            tops = list(b.tops)
            for r, top in enumerate(tops):
                if i < top.arity:
                    tops[r] = u.rooted() if top.is_leaf else graft(top, i, u, broken=True)
                    blocks[bi] = Block(b.gauge, tops)
                    return BrokenGaugedTree(x.bottom, blocks)
                i -= top.arity
        i -= b.arity
    raise IndexError("slot out of range")


def action_right_sign(x, i: int, u: RibbonTree) -> tuple[int, BrokenGaugedTree]:
    x = _as_broken(x)
    if not 0 <= i < x.arity:
        raise IndexError(f"slot {i} out of range for arity {x.arity}")
    inner = [None] * x.arity
    inner[i] = _events(u)
    sign, _ = splice_sign(x.events(), inner)
    return sign, _right_graft(x, i, u)


def action_right(x, i: int, u: RibbonTree) -> Chain:
    sign, y = action_right_sign(x, i, u)
    return Chain.basis(y, y.degree, sign)


def action_right_all(x, us: Sequence[RibbonTree | None]) -> tuple[int, BrokenGaugedTree]:
    """Right action in every slot at once, orientations concatenated in slot order."""
    x = _as_broken(x)
    if len(us) != x.arity:
        raise ValueError("one tree per slot")
    sign, _ = splice_sign(x.events(), [_events(u) for u in us])
    y = x
    for i in reversed(range(len(us))):
        if us[i] is not None and not us[i].is_leaf:
            y = _right_graft(y, i, us[i])
    return sign, y


# bimodule: differential ------------------------------------------------------

def _nested_edges(tg: GaugedTree):
    """Per internal edge (canonical order): (lower vertex, upper vertex)."""
    out = []
    counter = iter(range(len(tg.labels)))

    def go(node, parent):
        me = next(counter)
        if parent is not None:
            out.append((parent, me))
        for c in node.children:
            if not c.is_leaf:
                go(c, me)

    go(tg.tree, None)
    return out


def _subtree_split(tg: GaugedTree, v: int) -> tuple[GaugedTree, RibbonTree, int]:
    """Cut the subtree rooted at internal vertex ``v`` (not the root).

    Returns the lower gauged tree (a leaf where the subtree was), the
    subtree as an uncolored tree and the index of that leaf.
    """
    counter = iter(range(len(tg.labels)))
    labels = []
    found = {}
    leaf_count = [0]

    def go(node):
        me = next(counter)
        if me == v:
            found["tree"] = node
            found["leaf"] = leaf_count[0]
            for _ in range(len(node.internal_vertices()) - 1):
                next(counter)
            leaf_count[0] += node.arity
            return LEAF
        labels.append(tg.labels[me])
        kids = []
        for c in node.children:
            if c.is_leaf:
                leaf_count[0] += 1
                kids.append(c)
            else:
                kids.append(go(c))
        return RibbonTree(kids)

    lower = go(tg.tree)
    return GaugedTree(lower, labels), found["tree"], found["leaf"]


def _below_cuts(tg: GaugedTree):
    """Enumerate admissible cut sets under the gauge.

    Yields ``(bottom, blocks, cut_edges)``: the uncolored tree below the
    cuts, the gauged trees above them (left to right) and the indices of cut
    internal edges.
    """
    labels = tg.labels
    nested = tg.nested()
    # number internal vertices in preorder alongside the nested form
    counter = iter(range(len(labels)))

    def number(y):
        if y is None:
            return None
        me = next(counter)
        return (me, y[0], tuple(number(c) for c in y[1]))

    root = number(nested)

    def strip(y):
        """Gauged tree rooted at a numbered node."""
        def go(z):
            return None if z is None else (z[1], tuple(go(c) for c in z[2]))
        return GaugedTree.from_nested(go(y))

    def options(y):
        # y is a BELOW vertex kept in the bottom tree
        per_child = []
        for c in y[2]:
            opts = []
            if c is None:
                opts.append((LEAF, [TRIVIAL], []))
            else:
                opts.append((LEAF, [strip(c)], [c[0] - 1]))
                if c[1] == Side.BELOW:
                    opts.extend(options(c))
            per_child.append(opts)
        for combo in _product(per_child):
            kids = [k for k, _, _ in combo]
            blocks = [b for _, bs, _ in combo for b in bs]
            cuts = [e for _, _, es in combo for e in es]
            yield RibbonTree(kids), blocks, cuts

    if labels[0] != Side.BELOW:
        return
    yield from options(root)


def _product(lists):
    if not lists:
        yield ()
        return
    for x in lists[0]:
        for rest in _product(lists[1:]):
            yield (x,) + rest


@lru_cache(maxsize=None)
def boundary_terms(tg: GaugedTree) -> tuple:
    """Codimension-one terms of an unbroken gauged tree.

    Returns tuples ``(kind, target, sign, data)`` with ``kind`` one of
    ``int-collapse``, ``gauge-vertex``, ``above-break``, ``below-break``.
    Edge positions in ``data`` are 1-based positions in the canonical
    orientation; ``p = 0`` denotes the outgoing edge.
    """
    if tg.is_trivial:
        return ()
    j = tg.n_on
    out = []
    labels = tg.labels
    edges = _nested_edges(tg)

    for p, (lo, up) in enumerate(edges):
        a, b = labels[lo], labels[up]
        if a == Side.BELOW and b != Side.BELOW:
            # crossing edges never collapse; BELOW-ON edges are handled below
            continue
        new_labels = list(labels)
        new_labels[lo] = Side.ON if Side.ON in (a, b) else a
        del new_labels[up]
        target = GaugedTree(collapse_edge(tg.tree, p), new_labels)
        P = p + 1
        out.append(("int-collapse", BrokenGaugedTree.of(target), (-1) ** (P + 1 + j), (P,)))

    # A BELOW vertex meeting the gauge drags all of its ON children onto
    # it: their lengths all equal -lambda - d(r, v), so the edges collapse
    # together.  With one ON child this is an ordinary collapse.
    kids: dict[int, list[tuple[int, int]]] = {}
    for p, (lo, up) in enumerate(edges):
        kids.setdefault(lo, []).append((p, up))
    for v, ks in kids.items():
        if labels[v] != Side.BELOW or any(labels[u] == Side.BELOW for _, u in ks):
            continue
        on = [(p, u) for p, u in ks if labels[u] == Side.ON]
        if not on:
            continue
        t, new_labels = tg.tree, list(labels)
        new_labels[v] = Side.ON
        for p, u in reversed(on):
            t = collapse_edge(t, p)
            del new_labels[u]
        P = [p + 1 for p, _ in on]
        r = len(P)
        eps = sum(P) - r * (r + 1) // 2
        k = sum(1 for x in labels[: on[0][1]] if x == Side.ON)
        s = (-1) ** (eps + j + k * (r - 1))
        out.append(("int-collapse", BrokenGaugedTree.of(GaugedTree(t, new_labels)), s, tuple(P)))

    for target, k, kind in gauge_vertex_moves(tg):
        s = (-1) ** (j + k) if kind == "below" else (-1) ** (j + k + 1)
        out.append(("gauge-vertex", BrokenGaugedTree.of(target), s, (k, kind)))

    if labels[0] == Side.ABOVE:
        out.append(("above-break", BrokenGaugedTree(None, [Block(TRIVIAL, [tg.tree])]), (-1) ** j, (0,)))
    for p, (lo, up) in enumerate(edges):
        if labels[up] != Side.ABOVE:
            continue
        lower, upper, leaf = _subtree_split(tg, up)
        tops = [LEAF] * lower.arity
        tops[leaf] = upper
        P = p + 1
        out.append(("above-break", BrokenGaugedTree(None, [Block(lower, tops)]), (-1) ** (P + j), (P,)))

    n_edges = len(edges)
    for bottom, gauges, cuts in _below_cuts(tg):
        rest = [e for e in range(n_edges) if e not in cuts]
        eps = permutation_parity(cuts + rest)
        target = BrokenGaugedTree(bottom, [Block(g) for g in gauges])
        s = eps * (-1) ** (1 + j)
        out.append(("below-break", target, s, tuple(e + 1 for e in cuts)))
    return tuple(out)


@lru_cache(maxsize=None)
def diff_gauged(tg: GaugedTree) -> Chain:
    """Differential of an unbroken gauged tree with canonical orientation."""
    return Chain.from_items(((t, s) for _, t, s, _ in boundary_terms(tg)), tg.degree + 1)


@lru_cache(maxsize=None)
def diff_ombas_morph(x) -> Chain:
    """Differential on any (broken) gauged tree, canonical orientation."""
    x = _as_broken(x)
    g = x.unbroken
    if g is not None:
        return diff_gauged(g)
    out = Chain(degree=x.degree + 1)
    if x.bottom is None:
        blk = x.blocks[0]
        gauge = BrokenGaugedTree.of(blk.gauge)
        tops = list(blk.tops)
        sign0, _ = action_right_all(gauge, tops)
        for y, c in diff_gauged(blk.gauge).items():
            s, z = action_right_all(y, tops)
            out = out + Chain.basis(z, z.degree, c * s)
        acc = gauge.degree
        for r, u in enumerate(tops):
            if not u.is_leaf:
                koz = -1 if acc % 2 else 1
                for u2, c in diff_ombas(u).items():
                    new = tops.copy()
                    new[r] = u2
                    s, z = action_right_all(gauge, new)
                    out = out + Chain.basis(z, z.degree, koz * c * s)
                acc += degree(u)
        return out * sign0
    bottom = x.bottom
    xs = [BrokenGaugedTree(None, [b]) for b in x.blocks]
    sign0, _ = action_left_sign(bottom, xs)
    for b2, c in diff_ombas(bottom).items():
        s, z = action_left_sign(b2, xs)
        out = out + Chain.basis(z, z.degree, c * s)
    acc = degree(bottom)
    for i, xi in enumerate(xs):
        koz = -1 if acc % 2 else 1
        for y, c in diff_ombas_morph(xi).items():
            new = xs.copy()
            new[i] = y
            s, z = action_left_sign(bottom, new)
            out = out + Chain.basis(z, z.degree, koz * c * s)
        acc += xi.degree
    return out * sign0


def diff_morph_chain(x: Chain) -> Chain:
    out = Chain(degree=None if x.degree is None else x.degree + 1)
    for t, c in x.items():
        out = out + diff_ombas_morph(t) * c
    return out


def broken_gauged_trees(n: int) -> list[BrokenGaugedTree]:
    """All broken gauged trees of arity ``n`` (the cells of the compactified space)."""
    def plain(a):
        return [LEAF] if a == 1 else broken_trees(a)

    def blocks(a):
        out = []
        for m in range(1, a + 1):
            for g in enumerate_gauged_trees(m):
                for parts in _compositions_exact(a, m):
                    for tops in _product([plain(k) for k in parts]):
                        if g.is_trivial and tops[0].is_leaf and a > 1:
                            continue
                        out.append(Block(g, tops))
        return out

    cells = [BrokenGaugedTree(None, [b]) for b in blocks(n)]
    for k in range(2, n + 1):
        for bottom in broken_trees(k):
            for parts in _compositions_exact(n, k):
                for bs in _product([blocks(a) for a in parts]):
                    cells.append(BrokenGaugedTree(bottom, bs))
    return sorted(set(cells))


def _compositions_exact(n, k):
    if k == 0:
        if n == 0:
            yield ()
        return
    for first in range(1, n - k + 2):
        for rest in _compositions_exact(n - first, k - 1):
            yield (first,) + rest


# comparison images -----------------------------------------------------------

def phi_generator(n: int) -> Chain:
    """Image of the arity-``n`` A-infinity generator: signed binary trees."""
    if n < 2:
        raise ValueError("arity at least 2")
    return Chain({t: canonical_orientation(t).sign for t in enumerate_binary_trees(n)}, -(n - 2))


def psi_generator(n: int) -> Chain:
    """Image of the arity-``n`` morphism generator: signed gauged binary trees."""
    if n < 1:
        raise ValueError("arity at least 1")
    return Chain(
        {BrokenGaugedTree.of(g): canonical_orientation_gauged(g).sign for g in enumerate_cbrt(n)},
        1 - n,
    )


def export_table(gens, diff=None) -> list[dict]:
    """Generator -> list of (target, coefficient), JSON-ready."""
    from .trees import tree_to_dict

    rows = []
    for g in gens:
        d = (diff or (diff_ombas if isinstance(g, RibbonTree) else diff_ombas_morph))(g)
        rows.append({"generator": tree_to_dict(g), "terms": [[tree_to_dict(k), c] for k, c in d.sorted_items()]})
    return rows
