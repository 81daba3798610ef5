"""Planar rooted trees, gauged trees and their elementary surgeries.

Trees are immutable and hashable.  An internal vertex holds an ordered tuple
of children; a child whose ``cut`` flag is set hangs from its parent by a
broken edge.  Internal edges are indexed by the depth-first (preorder)
position of their upper vertex, the root excluded, so edge ``p`` is the
internal vertex number ``p + 1`` in preorder.  Collapsing or breaking an edge
therefore removes one entry of this order and leaves the relative order of
the remaining edges untouched; canonical orientations never need a reorder
after those two surgeries.

Gauged trees carry one label per internal vertex, listed in preorder.
"""

from __future__ import annotations

import enum
import itertools
import json
from functools import lru_cache
from typing import Iterator, Sequence


class RibbonTree:
    """A planar rooted tree, possibly with broken internal edges.

    Parameters
    ----------
    children : sequence of RibbonTree
        Ordered subtrees; empty for a leaf.
    cut : bool
        Whether the edge from this vertex to its parent is broken.  Ignored
        on leaves and meaningless on a root.
    """

    __slots__ = ("children", "cut", "arity", "_hash")

    def __init__(self, children: Sequence["RibbonTree"] = (), cut: bool = False):
        self.children = tuple(children)
        self.cut = bool(cut) and bool(self.children)
        self.arity = sum(c.arity for c in self.children) if self.children else 1
        self._hash = hash((self.children, self.cut))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, RibbonTree):
            return NotImplemented
        return self._hash == other._hash and self.cut == other.cut and self.children == other.children

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"RibbonTree({self.word()})"

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def sort_key(self):
        if not self.children:
            return ()
        return (int(self.cut),) + tuple(c.sort_key() for c in self.children)

    def rooted(self) -> "RibbonTree":
        """The same tree with the flag on its own outgoing edge cleared."""
        return RibbonTree(self.children) if self.cut else self

    def word(self) -> str:
        letters = iter("abcdefghijklmnopqrstuvwxyz")

        def go(node):
            if node.is_leaf:
                return next(letters)
            inner = "".join(go(c) for c in node.children)
            return ("|(" if node.cut else "(") + inner + ")"

        s = go(self)
        return s[1:-1] if not self.is_leaf and len(s) > 2 else s

    def internal_vertices(self) -> list["RibbonTree"]:
        out = []

        def go(node):
            if node.children:
                out.append(node)
                for c in node.children:
                    go(c)

        go(self)
        return out

    @property
    def n_edges(self) -> int:
        """Number of internal edges, broken ones included."""
        return len(self.internal_vertices()) - 1 if self.children else 0

    def broken_edges(self) -> list[int]:
        return [p for p, v in enumerate(self.internal_vertices()[1:]) if v.cut]

    def finite_edges(self) -> list[int]:
        """Indices of unbroken internal edges; their order is the canonical one."""
        return [p for p, v in enumerate(self.internal_vertices()[1:]) if not v.cut]

    @property
    def n_finite(self) -> int:
        return len(self.finite_edges())

    def is_stable(self) -> bool:
        return all(len(v.children) >= 2 for v in self.internal_vertices())

    def is_binary(self) -> bool:
        return not self.is_leaf and all(len(v.children) == 2 for v in self.internal_vertices())

    def events(self) -> str:
        """Preorder trace: ``E`` per finite internal edge, ``L`` per leaf.

        Grafting signs are read off by splicing these traces.
        """
        out = []

        def go(node):
            for c in node.children:
                if c.is_leaf:
                    out.append("L")
                else:
                    if not c.cut:
                        out.append("E")
                    go(c)

        if self.is_leaf:
            return "L"
        go(self)
        return "".join(out)

    def split_root(self) -> tuple["RibbonTree", list["RibbonTree | None"]]:
        """Split off the unbroken component containing the root.

        Returns the component and, for each of its leaves, either ``None``
        (a genuine leaf) or the broken-off subtree hanging there.
        """
        hanging: list[RibbonTree | None] = []

        def go(node):
            kids = []
            for c in node.children:
                if c.is_leaf:
                    hanging.append(None)
                    kids.append(LEAF)
                elif c.cut:
                    hanging.append(c.rooted())
                    kids.append(LEAF)
                else:
                    kids.append(go(c))
            return RibbonTree(kids, node.cut)

        if self.is_leaf:
            return self, [None]
        return go(self.rooted()), hanging

    def components(self) -> list["RibbonTree"]:
        """Unbroken components in depth-first order of their roots."""
        if self.is_leaf:
            return []
        top, hanging = self.split_root()
        out = [top]
        for h in hanging:
            if h is not None:
                out.extend(h.components())
        return out


LEAF = RibbonTree()


def corolla(n: int) -> RibbonTree:
    if n < 1:
        raise ValueError("arity must be positive")
    return LEAF if n == 1 else RibbonTree([LEAF] * n)


def left_comb(n: int) -> RibbonTree:
    t = RibbonTree([LEAF, LEAF])
    for _ in range(n - 2):
        t = RibbonTree([t, LEAF])
    return t


def right_comb(n: int) -> RibbonTree:
    t = RibbonTree([LEAF, LEAF])
    for _ in range(n - 2):
        t = RibbonTree([LEAF, t])
    return t


# enumeration -----------------------------------------------------------------

def _compositions(n, min_parts):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first, 0):
            if 1 + len(rest) >= min_parts:
                yield (first,) + rest


@lru_cache(maxsize=None)
def _stable(n: int) -> tuple[RibbonTree, ...]:
    if n == 1:
        return (LEAF,)
    out = []
    for parts in _compositions(n, 2):
        for kids in itertools.product(*(_stable(k) for k in parts)):
            out.append(RibbonTree(kids))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _binary(n: int) -> tuple[RibbonTree, ...]:
    if n == 1:
        return (LEAF,)
    out = [RibbonTree((a, b)) for k in range(1, n) for a in _binary(k) for b in _binary(n - k)]
    return tuple(sorted(out))


def enumerate_stable_trees(n: int) -> list[RibbonTree]:
    if n < 2:
        raise ValueError("stable trees need arity at least 2")
    return list(_stable(n))


def enumerate_binary_trees(n: int) -> list[RibbonTree]:
    if n < 2:
        raise ValueError("binary trees need arity at least 2")
    return list(_binary(n))


# surgeries -------------------------------------------------------------------

def _check_edge(t: RibbonTree, p: int) -> RibbonTree:
    verts = t.internal_vertices()
    if not 0 <= p < len(verts) - 1:
        raise IndexError(f"edge index {p} out of range for a tree with {max(len(verts) - 1, 0)} internal edges")
    return verts[p + 1]


def collapse_edge(t: RibbonTree, p: int) -> RibbonTree:
    """Contract internal edge ``p``; its upper vertex merges into the lower one."""
    if _check_edge(t, p).cut:
        raise ValueError(f"edge {p} is broken and cannot be collapsed")
    target = p + 1
    counter = itertools.count()

    def go(node):
        if node.is_leaf:
            return [node]
        mine = next(counter)
        kids = [x for c in node.children for x in go(c)]
        if mine == target:
            return kids
        return [RibbonTree(kids, node.cut)]

    return go(t)[0]


def break_edge(t: RibbonTree, p: int) -> RibbonTree:
    if _check_edge(t, p).cut:
        raise ValueError(f"edge {p} is already broken")
    target = p + 1
    counter = itertools.count()

    def go(node):
        if node.is_leaf:
            return node
        mine = next(counter)
        kids = [go(c) for c in node.children]
        return RibbonTree(kids, True if mine == target else node.cut)

    return go(t)


def graft(t: RibbonTree, i: int, s: RibbonTree, broken: bool = True) -> RibbonTree:
    """Plug the root of ``s`` into leaf ``i`` (0-based) of ``t``."""
    if not 0 <= i < t.arity:
        raise IndexError(f"slot {i} out of range for arity {t.arity}")
    if t.is_leaf:
        return s.rooted()
    counter = itertools.count()

    def go(node):
        if node.is_leaf:
            if next(counter) == i:
                return RibbonTree(s.children, broken)
            return node
        return RibbonTree([go(c) for c in node.children], node.cut)

    return go(t)


def graft_all(t: RibbonTree, subs: Sequence[RibbonTree | None], broken: bool = True) -> RibbonTree:
    """Plug ``subs[i]`` into leaf ``i`` for every ``i``; ``None`` keeps the leaf."""
    if len(subs) != t.arity:
        raise ValueError(f"expected {t.arity} subtrees, got {len(subs)}")
    if t.is_leaf:
        return LEAF if subs[0] is None else subs[0].rooted()
    it = iter(subs)

    def go(node):
        if node.is_leaf:
            s = next(it)
            if s is None or s.is_leaf:
                return node
            return RibbonTree(s.children, broken)
        return RibbonTree([go(c) for c in node.children], node.cut)

    return go(t)


# signs of reorderings --------------------------------------------------------

def permutation_parity(seq: Sequence[int]) -> int:
    """Sign of the permutation that sorts ``seq`` (distinct entries)."""
    inv = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    return -1 if inv % 2 else 1


def splice_sign(outer: str, inner: Sequence[str | None]) -> tuple[int, str]:
    """Parity of grafting traces, relative to concatenated orientations.

    ``outer`` is an event trace (see :meth:`RibbonTree.events`) and
    ``inner[i]`` the trace plugged into its ``i``-th leaf, or ``None`` for an
    identity.  The concatenation order lists the outer edges first, then the
    edges of each inner trace in slot order; the spliced trace is the
    depth-first order of the result.  Returns the sign and the spliced trace.
    """
    n_outer = outer.count("E")
    offsets = []
    acc = n_outer
    for s in inner:
        offsets.append(acc)
        acc += s.count("E") if s else 0
    seq, trace = [], []
    k_outer = 0
    leaf = 0
    for ch in outer:
        if ch == "E":
            seq.append(k_outer)
            k_outer += 1
            trace.append("E")
        else:
            s = inner[leaf]
            if s is None:
                trace.append("L")
            else:
                k = offsets[leaf]
                for c2 in s:
                    if c2 == "E":
                        seq.append(k)
                        k += 1
                trace.append(s)
            leaf += 1
    if leaf != len(inner):
        raise ValueError("slot count does not match the outer trace")
    return permutation_parity(seq), "".join(trace)


class Orientation:
    """An ordering of finite edges, stored as canonical order plus a sign."""

    __slots__ = ("n", "sign")

    def __init__(self, n: int, sign: int = 1):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        self.n, self.sign = n, sign

    @classmethod
    def from_ordering(cls, ordering: Sequence[int]) -> "Orientation":
        """``ordering`` lists canonical positions 0..n-1 in wedge order."""
        if sorted(ordering) != list(range(len(ordering))):
            raise ValueError("ordering must be a permutation of the finite edges")
        return cls(len(ordering), permutation_parity(ordering))

    def __eq__(self, other):
        return isinstance(other, Orientation) and (self.n, self.sign) == (other.n, other.sign)

    def __hash__(self):
        return hash((self.n, self.sign))

    def __neg__(self):
        return Orientation(self.n, -self.sign)

    def __repr__(self):
        body = "^".join(f"e{k + 1}" for k in range(self.n)) or "1"
        return ("+" if self.sign > 0 else "-") + body


# Tamari order ----------------------------------------------------------------

def _tag(t: RibbonTree):
    """Nested (id, kids) form with preorder ids; leaves become None."""
    counter = itertools.count()

    def go(node):
        if node.is_leaf:
            return None
        me = next(counter)
        return (me, tuple(go(c) for c in node.children))

    return go(t)


def _untag(x) -> RibbonTree:
    if x is None:
        return LEAF
    return RibbonTree([_untag(c) for c in x[1]])


def _preorder_ids(x) -> list[int]:
    out = []

    def go(y):
        if y is not None:
            out.append(y[0])
            for c in y[1]:
                go(c)

    go(x)
    return out


def _rotations(x):
    """All single right-to-left rotations of a tagged binary tree.

    Yields ``(new_tagged, moved_id)``; the moved edge keeps the id of the old
    upper vertex.
    """
    if x is None:
        return
    me, (a, w) = x
    if w is not None:
        wid, (b, c) = w
        yield (me, ((wid, (a, b)), c)), wid
    for new_a, mid in _rotations(a):
        yield (me, (new_a, w)), mid
    for new_w, mid in _rotations(w):
        yield (me, (a, new_w)), mid


def tamari_covers(t: RibbonTree) -> list[tuple[RibbonTree, tuple[int, int]]]:
    """Immediate lower neighbours of a binary tree in the Tamari order.

    Each entry is ``(neighbour, (p, q))`` where edge ``p`` of ``t`` becomes
    edge ``q`` of the neighbour after the rotation.
    """
    if not t.is_binary() or t.broken_edges():
        raise ValueError("Tamari covers are defined on unbroken binary trees")
    out = []
    for y, mid in _rotations(_tag(t)):
        ids = _preorder_ids(y)
        out.append((_untag(y), (mid - 1, ids.index(mid) - 1)))
    return out


def _transport_sign(source_ids_in_order, target_tagged, flipped: bool) -> int:
    target_ids = _preorder_ids(target_tagged)[1:]
    pos = [target_ids.index(i) for i in source_ids_in_order]
    return permutation_parity(pos) * (-1 if flipped else 1)


@lru_cache(maxsize=None)
def _orientation_table(n: int):
    """Propagate signs down BRT_n from the right comb.

    Returns ``(table, consistent)`` where ``consistent`` records whether all
    incoming covers agreed.
    """
    top = right_comb(n)
    table = {top: 1}
    consistent = True
    frontier = [top]
    while frontier:
        nxt = []
        for t in frontier:
            x = _tag(t)
            src = _preorder_ids(x)[1:]
            for y, mid in _rotations(x):
                s = table[t] * _transport_sign(src, y, True)
                u = _untag(y)
                if u in table:
                    consistent &= table[u] == s
                else:
                    table[u] = s
                    nxt.append(u)
        frontier = nxt
    return table, consistent


def canonical_orientation(t: RibbonTree) -> Orientation:
    if not t.is_binary() or t.broken_edges():
        raise ValueError("canonical orientations are defined on unbroken binary trees")
    return Orientation(t.n_edges, _orientation_table(t.arity)[0][t])


def tamari_path_independent(n: int) -> bool:
    if n == 2:
        return True
    return _orientation_table(n)[1]


# gauged trees ----------------------------------------------------------------

class Side(enum.IntEnum):
    """Position of a vertex relative to the gauge."""

    BELOW = 0
    ON = 1
    ABOVE = 2

    @property
    def short(self) -> str:
        return "BOA"[self.value]


def _label_ok(parent: Side | None, child: Side) -> bool:
    if parent is None:
        return True
    return child >= parent and not (child == parent == Side.ON)


class GaugedTree:
    """An unbroken stable tree with one gauge label per internal vertex.

    The arity-one tree :data:`TRIVIAL` has no vertices and no labels.
    """

    __slots__ = ("tree", "labels", "_hash")

    def __init__(self, tree: RibbonTree, labels: Sequence[Side]):
        labels = tuple(Side(x) for x in labels)
        verts = tree.internal_vertices()
        if tree.broken_edges():
            raise ValueError("a gauged tree is unbroken; use BrokenGaugedTree")
        if len(labels) != len(verts):
            raise ValueError(f"need {len(verts)} labels, got {len(labels)}")
        self.tree, self.labels = tree, labels
        if not self._valid():
            raise ValueError(f"invalid gauge labels {self.label_string()} on {tree.word()}")
        self._hash = hash((tree, labels))

    def _valid(self) -> bool:
        if not self.tree.is_stable():
            return False
        it = iter(self.labels)

        def go(node, parent):
            lab = next(it)
            if not _label_ok(parent, lab):
                return False
            return all(go(c, lab) for c in node.children if not c.is_leaf)

        return self.tree.is_leaf or go(self.tree, None)

    def __eq__(self, other):
        return isinstance(other, GaugedTree) and self.tree == other.tree and self.labels == other.labels

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.is_trivial:
            return "GaugedTree(TRIVIAL)"
        return f"GaugedTree({self.tree.word()}:{self.label_string()})"

    def sort_key(self):
        return (self.tree.arity, self.tree.sort_key(), self.labels)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def label_string(self) -> str:
        return "".join(x.short for x in self.labels)

    @property
    def is_trivial(self) -> bool:
        return self.tree.is_leaf

    @property
    def arity(self) -> int:
        return self.tree.arity

    @property
    def n_on(self) -> int:
        return sum(1 for x in self.labels if x == Side.ON)

    @property
    def n_edges(self) -> int:
        return self.tree.n_edges

    @property
    def degree(self) -> int:
        return 0 if self.is_trivial else self.n_on - self.n_edges - 1

    def events(self) -> str:
        return self.tree.events()

    def edge_ends(self) -> list[tuple[Side, Side]]:
        """(lower, upper) labels of each internal edge, canonical order."""
        out = []
        it = iter(self.labels)

        def go(node, parent):
            lab = next(it)
            if parent is not None:
                out.append((parent, lab))
            for c in node.children:
                if not c.is_leaf:
                    go(c, lab)

        if not self.is_trivial:
            go(self.tree, None)
        return out

    def crossed_edges(self) -> list[int]:
        return [p for p, (lo, up) in enumerate(self.edge_ends()) if lo == Side.BELOW and up == Side.ABOVE]

    def nested(self):
        """Nested ``(label, kids)`` form, leaves as ``None``."""
        it = iter(self.labels)

        def go(node):
            if node.is_leaf:
                return None
            lab = next(it)
            return (lab, tuple(go(c) for c in node.children))

        return go(self.tree)

    @classmethod
    def from_nested(cls, x) -> "GaugedTree":
        labels = []

        def go(y):
            if y is None:
                return LEAF
            labels.append(y[0])
            return RibbonTree([go(c) for c in y[1]])

        t = go(x)
        return cls(t, labels)


TRIVIAL = GaugedTree(LEAF, ())


def _labelings(t: RibbonTree, parent: Side | None = None) -> Iterator[tuple[Side, ...]]:
    if t.is_leaf:
        yield ()
        return
    for lab in Side:
        if not _label_ok(parent, lab):
            continue
        kids = [c for c in t.children if not c.is_leaf]
        for parts in itertools.product(*(list(_labelings(c, lab)) for c in kids)):
            yield (lab,) + tuple(x for p in parts for x in p)


@lru_cache(maxsize=None)
def _gauged(n: int) -> tuple[GaugedTree, ...]:
    if n == 1:
        return (TRIVIAL,)
    return tuple(sorted(GaugedTree(t, labs) for t in _stable(n) for labs in _labelings(t)))


def enumerate_gauged_trees(n: int) -> list[GaugedTree]:
    """All unbroken gauged stable trees of arity ``n``."""
    if n < 1:
        raise ValueError("gauged trees need arity at least 1")
    return list(_gauged(n))


def enumerate_cbrt(n: int) -> list[GaugedTree]:
    """Gauged binary trees whose gauge crosses no vertex."""
    if n == 1:
        return [TRIVIAL]
    return [g for g in enumerate_gauged_trees(n) if g.tree.is_binary() and g.n_on == 0]


def gauge_vertex_moves(tg: GaugedTree) -> list[tuple[GaugedTree, int, str]]:
    """Relabel one vertex adjacent to the gauge as ON.

    Returns ``(result, k, kind)`` with ``k`` the number of ON vertices to
    the left of the new one (its 0-based rank among the result's ON
    vertices) and ``kind`` either ``"below"`` (a BELOW vertex rises onto the
    gauge) or ``"above"`` (an ABOVE vertex descends onto it).
    """
    if tg.is_trivial:
        return []
    labels = list(tg.labels)
    parents = _parent_labels(tg)
    kids = _child_labels(tg)
    out = []
    for v, lab in enumerate(labels):
        if lab == Side.BELOW and all(c == Side.ABOVE for c in kids[v]):
            kind = "below"
        elif lab == Side.ABOVE and (parents[v] is None or parents[v] == Side.BELOW):
            kind = "above"
        else:
            continue
        new = labels.copy()
        new[v] = Side.ON
        k = sum(1 for x in labels[:v] if x == Side.ON)
        out.append((GaugedTree(tg.tree, new), k, kind))
    return out


def _parent_labels(tg: GaugedTree) -> list[Side | None]:
    out: list[Side | None] = []

    def go(y, parent):
        out.append(parent)
        for c in y[1]:
            if c is not None:
                go(c, y[0])

    go(tg.nested(), None)
    return out


def _child_labels(tg: GaugedTree) -> list[list[Side]]:
    """Labels of internal children per vertex (leaves omitted)."""
    out: list[list[Side]] = []

    def go(y):
        out.append([c[0] for c in y[1] if c is not None])
        for c in y[1]:
            if c is not None:
                go(c)

    go(tg.nested())
    return out


def _gauged_rotations(x, parent=None):
    """Covers of a tagged labeled binary tree in the gauged Tamari order.

    ``x`` is ``((label, id), kids)``.  Yields ``(new, moved_id, kind)``; the
    moved id is ``None`` for a gauge slide.
    """
    if x is None:
        return
    (lab, me), (a, w) = x
    if (
        lab == Side.ABOVE
        and parent in (None, Side.BELOW)
        and all(c is None or c[0][0] == Side.ABOVE for c in (a, w))
    ):
        yield ((Side.BELOW, me), (a, w)), None, "A"
    if w is not None:
        (wlab, wid), (b, c) = w
        if wlab == lab and lab != Side.ON:
            kind = "B1" if lab == Side.BELOW else "B2"
            yield ((lab, me), (((lab, wid), (a, b)), c)), wid, kind
    for new_a, mid, kind in _gauged_rotations(a, lab):
        yield ((lab, me), (new_a, w)), mid, kind
    for new_w, mid, kind in _gauged_rotations(w, lab):
        yield ((lab, me), (a, new_w)), mid, kind


def _gtag(tg: GaugedTree):
    counter = itertools.count()

    def go(y):
        if y is None:
            return None
        return ((y[0], next(counter)), tuple(go(c) for c in y[1]))

    return go(tg.nested())


def _guntag(x) -> GaugedTree:
    def go(y):
        if y is None:
            return None
        return (y[0][0], tuple(go(c) for c in y[1]))

    return GaugedTree.from_nested(go(x))


def _gids(x) -> list[int]:
    out = []

    def go(y):
        if y is not None:
            out.append(y[0][1])
            for c in y[1]:
                go(c)

    go(x)
    return out


def gauged_tamari_covers(tg: GaugedTree) -> list[tuple[GaugedTree, str]]:
    """Immediate lower neighbours in the gauged Tamari order with cover type.

    The type is ``"A"`` when the gauge slides through a vertex, ``"B1"`` for
    a rotation below the gauge and ``"B2"`` for one above it.
    """
    if tg.is_trivial:
        return []
    return [(_guntag(y), kind) for y, _, kind in _gauged_rotations(_gtag(tg))]


@lru_cache(maxsize=None)
def _gauged_orientation_table(n: int):
    top = GaugedTree(right_comb(n), [Side.ABOVE] * (n - 1))
    table = {top: 1}
    consistent = True
    frontier = [top]
    while frontier:
        nxt = []
        for g in frontier:
            x = _gtag(g)
            src = _gids(x)[1:]
            for y, _, kind in _gauged_rotations(x):
                u = _guntag(y)
                target_ids = _gids(y)[1:]
                s = table[g] * permutation_parity([target_ids.index(i) for i in src]) * (1 if kind == "A" else -1)
                if u in table:
                    consistent &= table[u] == s
                else:
                    table[u] = s
                    nxt.append(u)
        frontier = nxt
    return table, consistent


def canonical_orientation_gauged(tg: GaugedTree) -> Orientation:
    """Canonical orientation of a gauged binary tree crossing no vertex.

    Computed by propagation through the gauged Tamari order; callers can
    compare with :func:`canonical_orientation` of the underlying tree.
    """
    if tg.is_trivial:
        return Orientation(0, 1)
    if not tg.tree.is_binary() or tg.n_on:
        raise ValueError("canonical gauged orientations need a binary tree with no ON vertex")
    return Orientation(tg.n_edges, _gauged_orientation_table(tg.arity)[0][tg])


def gauged_tamari_path_independent(n: int) -> bool:
    if n <= 2:
        return True
    table, ok = _gauged_orientation_table(n)
    return ok and len(table) == len(enumerate_cbrt(n))


# broken gauged trees ---------------------------------------------------------

class Block:
    """A gauged tree with uncolored trees grafted (broken) onto its leaves."""

    __slots__ = ("gauge", "tops", "_hash")

    def __init__(self, gauge: GaugedTree, tops: Sequence[RibbonTree] | None = None):
        tops = tuple(t.rooted() for t in tops) if tops is not None else (LEAF,) * gauge.arity
        if len(tops) != gauge.arity:
            raise ValueError("one top tree per gauge leaf")
        for t in tops:
            if not t.is_leaf and not all(c.is_stable() for c in t.components()):
                raise ValueError("top trees must have stable components")
        self.gauge, self.tops = gauge, tops
        self._hash = hash((gauge, tops))

    def __eq__(self, other):
        return isinstance(other, Block) and self.gauge == other.gauge and self.tops == other.tops

    def __hash__(self):
        return self._hash

    @property
    def arity(self) -> int:
        return sum(t.arity for t in self.tops)

    def events(self) -> str:
        return splice_sign(self.gauge.events(), [None if t.is_leaf else t.events() for t in self.tops])[1]

    def sort_key(self):
        return (self.gauge.sort_key(), tuple(t.sort_key() for t in self.tops))

    def __repr__(self):
        if all(t.is_leaf for t in self.tops):
            return repr(self.gauge)
        return f"{self.gauge!r}<{', '.join(t.word() for t in self.tops)}>"


class BrokenGaugedTree:
    """A broken gauged tree in normal form.

    ``bottom`` is an uncolored (possibly broken) tree below the gauges, or
    ``None`` when a single gauged block sits at the root.  ``blocks`` lists
    one block per leaf of ``bottom``.
    """

    __slots__ = ("bottom", "blocks", "_hash")

    def __init__(self, bottom: RibbonTree | None, blocks: Sequence[Block]):
        blocks = tuple(blocks)
        if bottom is not None and bottom.is_leaf:
            bottom = None
        if bottom is None and len(blocks) != 1:
            raise ValueError("without a bottom tree there is exactly one block")
        if bottom is not None and bottom.arity != len(blocks):
            raise ValueError("one block per leaf of the bottom tree")
        if bottom is not None:
            bottom = bottom.rooted()
        self.bottom, self.blocks = bottom, blocks
        self._hash = hash((bottom, blocks))

    @classmethod
    def of(cls, tg: GaugedTree) -> "BrokenGaugedTree":
        return cls(None, [Block(tg)])

    def __eq__(self, other):
        return isinstance(other, BrokenGaugedTree) and self.bottom == other.bottom and self.blocks == other.blocks

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (self.arity, () if self.bottom is None else self.bottom.sort_key(), tuple(b.sort_key() for b in self.blocks))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        inner = ", ".join(repr(b) for b in self.blocks)
        if self.bottom is None:
            return inner
        return f"{self.bottom.word()}[{inner}]"

    @property
    def arity(self) -> int:
        return sum(b.arity for b in self.blocks)

    @property
    def unbroken(self) -> GaugedTree | None:
        """The gauged tree itself when there is nothing broken."""
        if self.bottom is None and all(t.is_leaf for t in self.blocks[0].tops):
            return self.blocks[0].gauge
        return None

    def events(self) -> str:
        inner = [b.events() for b in self.blocks]
        if self.bottom is None:
            return inner[0]
        return splice_sign(self.bottom.events(), inner)[1]

    @property
    def n_finite(self) -> int:
        return self.events().count("E")

    @property
    def n_on(self) -> int:
        return sum(b.gauge.n_on for b in self.blocks)

    @property
    def n_gauges(self) -> int:
        """Number of non-trivial gauges."""
        return sum(1 for b in self.blocks if not b.gauge.is_trivial)

    @property
    def degree(self) -> int:
        return self.n_on - self.n_finite - self.n_gauges


# text forms ------------------------------------------------------------------

def parse_word(s: str) -> RibbonTree:
    """Inverse of :meth:`RibbonTree.word`; leaf letters are arbitrary lowercase."""
    s = s.replace(" ", "")
    pos = 0

    def items(closing):
        nonlocal pos
        kids = []
        while pos < len(s) and s[pos] != ")":
            ch = s[pos]
            if ch.isalpha():
                kids.append(LEAF)
                pos += 1
            elif ch == "(" or s.startswith("|(", pos):
                cut = ch == "|"
                pos += 2 if cut else 1
                inner = items(True)
                if len(inner) < 2:
                    raise ValueError(f"vertex with fewer than two inputs in {s!r}")
                kids.append(RibbonTree(inner, cut))
            else:
                raise ValueError(f"unexpected {ch!r} at {pos} in {s!r}")
        if closing:
            if pos >= len(s):
                raise ValueError(f"unbalanced parentheses in {s!r}")
            pos += 1
        return kids

    kids = items(False)
    if pos != len(s):
        raise ValueError(f"unbalanced parentheses in {s!r}")
    if len(kids) == 1 and kids[0].is_leaf:
        return LEAF
    if len(kids) == 1:
        return kids[0].rooted()
    return RibbonTree(kids)


def parse_gauged(s: str) -> GaugedTree:
    """``word:labels`` with one of ``B``/``O``/``A`` per vertex in preorder, or ``TRIVIAL``."""
    if s.strip().upper() in ("TRIVIAL", "ID"):
        return TRIVIAL
    word, sep, labels = s.partition(":")
    if not sep:
        raise ValueError(f"expected word:labels, got {s!r}")
    try:
        sides = [Side("BOA".index(c)) for c in labels.strip().upper()]
    except ValueError:
        raise ValueError(f"labels must use B, O, A: {labels!r}") from None
    return GaugedTree(parse_word(word), sides)


def to_text(x) -> str:
    """Compact text form; gauged trees print as ``word:labels`` like ``parse_gauged`` reads."""
    if isinstance(x, GaugedTree):
        return "TRIVIAL" if x.is_trivial else f"{x.tree.word()}:{x.label_string()}"
    if isinstance(x, Block):
        s = to_text(x.gauge)
        if not all(t.is_leaf for t in x.tops):
            s += "<" + ", ".join(t.word() for t in x.tops) + ">"
        return s
    if isinstance(x, BrokenGaugedTree):
        inner = ", ".join(to_text(b) for b in x.blocks)
        return inner if x.bottom is None else f"{x.bottom.word()}[{inner}]"
    if isinstance(x, RibbonTree):
        return x.word()
    return repr(x)


# JSON ------------------------------------------------------------------------

def _shape(t: RibbonTree):
    return [_shape(c) for c in t.children]


def _from_shape(x) -> RibbonTree:
    return RibbonTree([_from_shape(c) for c in x])


def tree_to_dict(x) -> dict:
    """Serialize any tree type to plain JSON-ready data."""
    if isinstance(x, RibbonTree):
        return {"type": "tree", "shape": _shape(x), "broken": x.broken_edges()}
    if isinstance(x, GaugedTree):
        return {"type": "gauged", "shape": _shape(x.tree), "labels": [s.name for s in x.labels]}
    if isinstance(x, BrokenGaugedTree):
        return {
            "type": "broken_gauged",
            "bottom": None if x.bottom is None else tree_to_dict(x.bottom),
            "blocks": [{"gauge": tree_to_dict(b.gauge), "tops": [tree_to_dict(t) for t in b.tops]} for b in x.blocks],
        }
    raise TypeError(f"cannot serialize {type(x).__name__}")


def tree_from_dict(d: dict):
    kind = d.get("type")
    if kind == "tree":
        t = _from_shape(d["shape"])
        for p in d.get("broken", []):
            t = break_edge(t, p)
        return t
    if kind == "gauged":
        return GaugedTree(_from_shape(d["shape"]), [Side[s] for s in d["labels"]])
    if kind == "broken_gauged":
        bottom = None if d["bottom"] is None else tree_from_dict(d["bottom"])
        blocks = [Block(tree_from_dict(b["gauge"]), [tree_from_dict(t) for t in b["tops"]]) for b in d["blocks"]]
        return BrokenGaugedTree(bottom, blocks)
    raise ValueError(f"unknown tree type {kind!r}")


def dumps(x) -> str:
    return json.dumps(tree_to_dict(x), separators=(",", ":"))


def loads(s: str):
    return tree_from_dict(json.loads(s))
