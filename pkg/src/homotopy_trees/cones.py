"""Polyhedral cones of gauged metric trees, decided exactly.

Coordinates are ``(lam, l_1, ..., l_e)`` with edge lengths in canonical
(depth-first) order.  Writing ``h(v)`` for the distance from the root to an
internal vertex ``v``, a gauged tree's cell is cut out by

* ``l_p > 0`` for every internal edge,
* ``-lam > h(v)`` when ``v`` is BELOW the gauge,
* ``-lam < h(v)`` when ``v`` is ABOVE it,
* ``-lam = h(v)`` when ``v`` is ON it.

Boundary strata are found from the geometry alone: finite faces as tight
constraint sets of the closed cone, faces at infinity as recession
directions whose limiting broken tree has codimension one.  Only the signs
come from closed forms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import ombas
from .chains import Chain, Verdict
from .trees import (
    LEAF,
    TRIVIAL,
    Block,
    BrokenGaugedTree,
    GaugedTree,
    RibbonTree,
    Side,
    collapse_edge,
    enumerate_gauged_trees,
    enumerate_stable_trees,
    permutation_parity,
)

GT, GE, EQ = ">", ">=", "="


@dataclass(frozen=True)
class Constraint:
    """``coeffs . x + const  (rel)  0``; ``tag`` names the edge or vertex."""

    coeffs: tuple
    const: Fraction
    rel: str
    tag: tuple = ()

    def value(self, x) -> Fraction:
        return sum(a * b for a, b in zip(self.coeffs, x)) + self.const

    def status(self, x) -> str:
        """``"sat"``, ``"tight"`` (equality reached by a strict/weak row) or ``"bad"``."""
        v = self.value(x)
        if self.rel == EQ:
            return "sat" if v == 0 else "bad"
        if v > 0:
            return "sat"
        if v == 0:
            return "sat" if self.rel == GE else "tight"
        return "bad"

    def relaxed(self) -> "Constraint":
        return Constraint(self.coeffs, self.const, GE if self.rel == GT else self.rel, self.tag)

    def with_rel(self, rel) -> "Constraint":
        return Constraint(self.coeffs, self.const, rel, self.tag)

    def to_dict(self):
        return {"coeffs": [str(c) for c in self.coeffs], "const": str(self.const), "rel": self.rel, "tag": list(self.tag)}


# Fourier-Motzkin -------------------------------------------------------------

def _substitute(c: Constraint, k: int, expr: tuple, expr_const: Fraction) -> Constraint:
    # replace x_k by expr . x + expr_const
    a = c.coeffs[k]
    if a == 0:
        return c
    coeffs = tuple(ci + a * ei if i != k else Fraction(0) for i, (ci, ei) in enumerate(zip(c.coeffs, expr)))
    return Constraint(coeffs, c.const + a * expr_const, c.rel, c.tag)


def find_point(rows: Sequence[Constraint], n: int):
    """A rational point satisfying every row, or ``None`` if there is none."""
    rows = [Constraint(tuple(map(Fraction, r.coeffs)), Fraction(r.const), r.rel, r.tag) for r in rows]
    # solve equalities by substitution
    eliminated = []
    todo = rows
    while True:
        eq = next((r for r in todo if r.rel == EQ and any(r.coeffs)), None)
        if eq is None:
            break
        k = max(i for i, a in enumerate(eq.coeffs) if a != 0)
        a = eq.coeffs[k]
        expr = tuple(Fraction(0) if i == k else -ci / a for i, ci in enumerate(eq.coeffs))
        ec = -eq.const / a
        eliminated.append((k, expr, ec))
        todo = [_substitute(r, k, expr, ec) for r in todo if r is not eq]
    for r in todo:
        if r.rel == EQ and not any(r.coeffs) and r.const != 0:
            return None
    ineqs = [r for r in todo if r.rel != EQ]
    free = [i for i in range(n) if i not in {k for k, _, _ in eliminated}]
    stages = []
    cur = ineqs
    for k in reversed(free):
        stages.append((k, cur))
        pos = [r for r in cur if r.coeffs[k] > 0]
        neg = [r for r in cur if r.coeffs[k] < 0]
        nxt = [r for r in cur if r.coeffs[k] == 0]
        seen = set()
        for p in pos:
            for q in neg:
                ap, aq = p.coeffs[k], -q.coeffs[k]
                coeffs = tuple(aq * x + ap * y for x, y in zip(p.coeffs, q.coeffs))
                const = aq * p.const + ap * q.const
                rel = GT if GT in (p.rel, q.rel) else GE
                key = (coeffs, const, rel)
                if key not in seen:
                    seen.add(key)
                    nxt.append(Constraint(coeffs, const, rel))
        cur = nxt
    for r in cur:
        if (r.rel == GT and r.const <= 0) or (r.rel == GE and r.const < 0):
            return None
    x = [Fraction(0)] * n
    for k, sys_k in reversed(stages):
        lo, lo_strict, hi, hi_strict = None, False, None, False
        for r in sys_k:
            a = r.coeffs[k]
            if a == 0:
                continue
            rest = sum(c * v for i, (c, v) in enumerate(zip(r.coeffs, x)) if i != k) + r.const
            bound = -rest / a
            strict = r.rel == GT
            if a > 0 and (lo is None or bound > lo or (bound == lo and strict)):
                lo, lo_strict = bound, strict
            if a < 0 and (hi is None or bound < hi or (bound == hi and strict)):
                hi, hi_strict = bound, strict
        if lo is not None and hi is not None:
            if lo > hi or (lo == hi and (lo_strict or hi_strict)):
                return None
            x[k] = (lo + hi) / 2
        elif lo is not None:
            x[k] = lo + 1
        elif hi is not None:
            x[k] = hi - 1
    for k, expr, ec in reversed(eliminated):
        x[k] = sum(e * v for e, v in zip(expr, x)) + ec
    if not all(r.status(x) == "sat" for r in rows):
        raise ArithmeticError("elimination produced an infeasible witness")
    return tuple(x)


def feasible(rows, n) -> bool:
    return find_point(rows, n) is not None


def _rank(vectors) -> int:
    m = [list(map(Fraction, v)) for v in vectors]
    r = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


# cone systems ----------------------------------------------------------------

def _shape(t: RibbonTree):
    """Parent index per internal vertex (preorder), root first, and leaf slots."""
    parent = []

    def go(node, par):
        me = len(parent)
        parent.append(par)
        for c in node.children:
            if not c.is_leaf:
                go(c, me)

    if not t.is_leaf:
        go(t, None)
    return parent


def _heights(parent, n_vars):
    # h(v) as coefficient rows over (lam, l_1..l_e); edge p sits below vertex p+1
    rows = []
    for v in range(len(parent)):
        row = [Fraction(0)] * n_vars
        u = v
        while parent[u] is not None:
            row[u] = Fraction(1)  # variable index u is edge u-1, offset by lam at 0
            u = parent[u]
        rows.append(row)
    return rows


@dataclass
class ConeSystem:
    gauged: GaugedTree
    n_vars: int
    rows: list

    @property
    def edges(self) -> int:
        return self.n_vars - 1

    def interior_point(self):
        return find_point(self.rows, self.n_vars)

    def contains(self, x) -> str:
        """``"inside"``, ``"boundary"`` (only strictness fails) or ``"outside"``."""
        st = [r.status(x) for r in self.rows]
        if "bad" in st:
            return "outside"
        return "boundary" if "tight" in st else "inside"

    def to_dict(self) -> dict:
        return {"gauged": repr(self.gauged), "variables": ["lam"] + [f"l{p}" for p in range(1, self.n_vars)],
                "rows": [r.to_dict() for r in self.rows]}


def cone_system(tg: GaugedTree) -> ConeSystem:
    if tg.is_trivial:
        return ConeSystem(tg, 1, [])
    parent = _shape(tg.tree)
    n = len(parent)  # lam plus one length per non-root vertex
    h = _heights(parent, n)
    rows = []
    for p in range(1, n):
        rows.append(Constraint(tuple(Fraction(int(i == p)) for i in range(n)), Fraction(0), GT, ("edge", p - 1)))
    for v, lab in enumerate(tg.labels):
        below = tuple([Fraction(-1)] + [-c for c in h[v][1:]])  # -lam - h(v)
        if lab == Side.BELOW:
            rows.append(Constraint(below, Fraction(0), GT, ("vertex", v)))
        elif lab == Side.ABOVE:
            rows.append(Constraint(tuple(-c for c in below), Fraction(0), GT, ("vertex", v)))
        else:
            rows.append(Constraint(below, Fraction(0), EQ, ("vertex", v)))
    return ConeSystem(tg, n, rows)


def cone_dimension(tg: GaugedTree) -> int:
    c = cone_system(tg)
    if c.interior_point() is None:
        raise ValueError(f"empty cell for {tg!r}")
    return c.n_vars - _rank([r.coeffs for r in c.rows if r.rel == EQ])


def heights_at(t: RibbonTree, lengths: Sequence) -> list:
    parent = _shape(t)
    out = []
    for v, par in enumerate(parent):
        out.append(Fraction(0) if par is None else out[par] + Fraction(lengths[v - 1]))
    return out


def classify_point(t: RibbonTree, lam, lengths: Sequence):
    """The gauged tree over ``t`` whose cell contains the point.

    Returns ``(gauged_tree, on_lower_cell)``; the flag is set when the gauge
    passes through a vertex, i.e. the point sits in a lower-dimensional cell.
    """
    lengths = [Fraction(x) for x in lengths]
    if len(lengths) != t.n_edges:
        raise ValueError("one length per internal edge")
    if any(x <= 0 for x in lengths):
        raise ValueError("edge lengths must be positive")
    g = -Fraction(lam)
    labels = [Side.BELOW if h < g else Side.ABOVE if h > g else Side.ON for h in heights_at(t, lengths)]
    tg = GaugedTree(t, labels)
    return tg, Side.ON in labels


# boundary strata -------------------------------------------------------------

@dataclass(frozen=True)
class Stratum:
    kind: str
    target: BrokenGaugedTree
    sign: int
    data: tuple


def _children(parent):
    kids = {v: [] for v in range(len(parent))}
    for v, par in enumerate(parent):
        if par is not None:
            kids[par].append(v)
    return kids


def _finite_faces(tg: GaugedTree, c: ConeSystem):
    closed = [r.relaxed() for r in c.rows]
    ineq = [i for i, r in enumerate(closed) if r.rel != EQ]
    eq_rows = [r.coeffs for r in closed if r.rel == EQ]
    dim = c.n_vars - _rank(eq_rows)
    seen = set()
    for i in ineq:
        tight_i = closed[i].with_rel(EQ)
        base = [tight_i if k == i else r for k, r in enumerate(closed)]
        if not feasible(base, c.n_vars):
            continue
        tight = {i}
        for k in ineq:
            if k != i:
                probe = [r.with_rel(GT) if m == k else r for m, r in enumerate(base)]
                if not feasible(probe, c.n_vars):
                    tight.add(k)
        key = frozenset(tight)
        if key in seen:
            continue
        seen.add(key)
        if c.n_vars - _rank(eq_rows + [closed[k].coeffs for k in tight]) != dim - 1:
            continue
        face = [r.with_rel(EQ) if k in tight else c.rows[k] for k, r in enumerate(closed)]
        x = find_point(face, c.n_vars)
        yield [c.rows[k].tag for k in sorted(tight)], x


def _collapse_at_point(tg: GaugedTree, edges: Iterable[int], x) -> GaugedTree:
    lam, lengths = x[0], x[1:]
    hs = heights_at(tg.tree, [max(l, Fraction(0)) for l in lengths]) if lengths else [Fraction(0)]
    keep = [v for v in range(len(hs)) if v - 1 not in set(edges)]
    t = tg.tree
    for p in sorted(edges, reverse=True):
        t = collapse_edge(t, p)
    g = -lam
    labels = [Side.BELOW if hs[v] < g else Side.ABOVE if hs[v] > g else Side.ON for v in keep]
    return GaugedTree(t, labels)


def _finite_sign(tg: GaugedTree, parent, edges, verts) -> tuple[str, int, tuple]:
    labels = tg.labels
    j = tg.n_on
    kids = _children(parent)
    below = [v for v in verts if labels[v] == Side.BELOW]
    if below:
        (v,) = below
        on_kids = [u for u in kids[v] if labels[u] == Side.ON]
        if sorted(edges) != sorted(u - 1 for u in on_kids):
            raise AssertionError("unexpected tight set at a BELOW vertex")
        first = on_kids[0] if on_kids else v
        k = sum(1 for w in range(first) if labels[w] == Side.ON)
        if not on_kids:
            return "gauge-vertex", (-1) ** (j + k), (k,)
        P = on_kids  # the edge below vertex u has 1-based position u
        r = len(P)
        e = sum(P) - r * (r + 1) // 2
        return "int-collapse", (-1) ** (e + j + k * (r - 1)), tuple(P)
    if not edges:
        (v,) = verts
        k = sum(1 for w in range(v) if labels[w] == Side.ON)
        return "gauge-vertex", (-1) ** (j + k + 1), (k,)
    (p,) = edges
    return "int-collapse", (-1) ** (p + 1 + 1 + j), (p + 1,)


def _indexed(t: RibbonTree):
    """``(vertex id, children)`` in preorder; leaves are ``None``."""
    counter = iter(range(10**6))

    def go(x):
        if x.is_leaf:
            return None
        me = next(counter)
        return (me, [go(c) for c in x.children])

    return go(t)


def _build_limit(tg: GaugedTree, dlam: int, S: frozenset) -> BrokenGaugedTree:
    """The broken gauged tree reached along the direction ``(dlam, 1_S)``."""
    labels = tg.labels

    def crosses(y):
        return y is not None and y[0] - 1 in S

    def offset(k):
        return -dlam - k

    def with_cut(sub, y):
        return RibbonTree(sub.children, cut=crosses(y))

    def plain(y):
        # uncolored tree above the gauged layer, broken at every S edge
        return RibbonTree([LEAF if c is None else with_cut(plain(c), c) for c in y[1]])

    def gauged(y):
        labs, tops = [], []

        def go(z):
            labs.append(labels[z[0]])
            kids = []
            for c in z[1]:
                if c is None:
                    tops.append(LEAF)
                    kids.append(LEAF)
                elif crosses(c):
                    tops.append(plain(c))
                    kids.append(LEAF)
                else:
                    kids.append(go(c))
            return RibbonTree(kids)

        return Block(GaugedTree(go(y), labs), tops)

    def bottom(y, blocks, k):
        kids = []
        for c in y[1]:
            if c is None:
                blocks.append(Block(TRIVIAL))
                kids.append(LEAF)
                continue
            kc = k + int(crosses(c))
            if offset(kc) == 0:
                blocks.append(gauged(c))
                kids.append(LEAF)
            else:
                kids.append(with_cut(bottom(c, blocks, kc), c))
        return RibbonTree(kids)

    root = _indexed(tg.tree)
    if offset(0) == 0:
        return BrokenGaugedTree(None, [gauged(root)])
    if offset(0) < 0:
        return BrokenGaugedTree(None, [Block(TRIVIAL, [plain(root)])])
    blocks = []
    t = bottom(root, blocks, 0)
    return BrokenGaugedTree(t, blocks)


def _infinite_faces(tg: GaugedTree, c: ConeSystem, parent):
    e = c.edges
    for dlam in (-1, 0, 1):
        for size in range(e + 1):
            for S in combinations(range(e), size):
                d = [Fraction(dlam)] + [Fraction(int(p in S)) for p in range(e)]
                ok = True
                for r in c.rows:
                    v = sum(a * b for a, b in zip(r.coeffs, d))
                    if (r.rel == EQ and v != 0) or (r.rel != EQ and v < 0):
                        ok = False
                        break
                if not ok or (dlam == 0 and not S):
                    continue
                # offsets of the component sitting above each S edge
                depth = {}
                for p in S:
                    u, k = p + 1, 0
                    while u is not None:
                        if u - 1 in S:
                            k += 1
                        u = parent[u]
                    depth[p] = k
                n_zero = (1 if dlam == 0 else 0) + sum(1 for p in S if -dlam - depth[p] == 0)
                if len(S) + 1 - n_zero != 1:
                    continue
                yield dlam, frozenset(S)


def _infinite_sign(tg: GaugedTree, parent, dlam, S) -> tuple[str, int, tuple]:
    j = tg.n_on
    if dlam == 0:
        (p,) = S
        return "above-break", (-1) ** (p + 1 + j), (p + 1,)
    if dlam == 1:
        return "above-break", (-1) ** j, (0,)
    # blocks read left to right = preorder of the cut edges' upper endpoints
    order = sorted(S)
    rest = [p for p in range(tg.n_edges) if p not in S]
    return "below-break", permutation_parity(order + rest) * (-1) ** (1 + j), tuple(p + 1 for p in order)


def boundary_strata(tg: GaugedTree) -> list[Stratum]:
    """Codimension-one strata of the compactified cell with their signs."""
    if tg.is_trivial:
        return []
    c = cone_system(tg)
    parent = _shape(tg.tree)
    out = []
    for tags, x in _finite_faces(tg, c):
        edges = [t[1] for t in tags if t[0] == "edge"]
        verts = [t[1] for t in tags if t[0] == "vertex"]
        kind, sign, data = _finite_sign(tg, parent, edges, verts)
        target = _collapse_at_point(tg, edges, x)
        out.append(Stratum(kind, BrokenGaugedTree.of(target), sign, data))
    for dlam, S in _infinite_faces(tg, c, parent):
        kind, sign, data = _infinite_sign(tg, parent, dlam, S)
        out.append(Stratum(kind, _build_limit(tg, dlam, S), sign, data))
    return sorted(out, key=lambda s: (s.kind, s.target.sort_key(), s.sign))


def strata_chain(tg: GaugedTree) -> Chain:
    out: dict = {}
    for s in boundary_strata(tg):
        out[s.target] = out.get(s.target, 0) + s.sign
    return Chain(out, tg.degree + 1)


# checks ----------------------------------------------------------------------

def check_dimensions(max_arity: int) -> Verdict:
    n_checked = 0
    for n in range(1, max_arity + 1):
        for tg in enumerate_gauged_trees(n):
            n_checked += 1
            want = tg.n_edges + 1 - tg.n_on
            got = cone_dimension(tg)
            if got != want:
                return Verdict(False, "cone dimension", witness=repr(tg), detail=f"{got} != {want}")
    return Verdict(True, "cone dimension = e+1-j", detail=f"{n_checked} cells", checked=n_checked)


def check_strata(max_arity: int) -> Verdict:
    """Geometric strata agree with the combinatorial differential, term by term."""
    n_checked = 0
    for n in range(1, max_arity + 1):
        for tg in enumerate_gauged_trees(n):
            n_checked += 1
            geo = sorted(((s.target.sort_key(), s.sign) for s in boundary_strata(tg)))
            comb = sorted(((t.sort_key(), s) for _, t, s, _ in ombas.boundary_terms(tg)))
            if geo != comb or strata_chain(tg) != ombas.diff_gauged(tg):
                return Verdict(False, "boundary strata", witness=repr(tg), detail=f"{len(geo)} geometric vs {len(comb)}")
    return Verdict(True, "boundary strata = differential", detail=f"{n_checked} cells", checked=n_checked)


def _random_point(rng, e):
    denoms = (1, 2, 3, 4)
    lam = Fraction(rng.randint(-8 * e - 4, 4), rng.choice(denoms))
    lengths = [Fraction(rng.randint(1, 8), rng.choice(denoms)) for _ in range(e)]
    return lam, lengths


def check_partition(max_arity: int, samples: int = 1000, seed: int = 0) -> Verdict:
    """Each sampled point lies in exactly one cell over its tree; cells are disjoint."""
    rng = random.Random(seed)
    total = 0
    for n in range(2, max_arity + 1):
        cells = enumerate_gauged_trees(n)
        for t in enumerate_stable_trees(n):
            over = [cone_system(g) for g in cells if g.tree == t]
            for a, b in combinations(over, 2):
                if feasible(a.rows + b.rows, a.n_vars):
                    return Verdict(False, "cell partition", witness=(repr(a.gauged), repr(b.gauged)), detail="cells overlap")
            for _ in range(samples):
                lam, lengths = _random_point(rng, t.n_edges)
                x = (lam, *lengths)
                hits = [c.gauged for c in over if c.contains(x) == "inside"]
                got, _ = classify_point(t, lam, lengths)
                total += 1
                if hits != [got]:
                    return Verdict(False, "cell partition", witness=(t.word(), str(lam), [str(l) for l in lengths]),
                                   detail=f"{len(hits)} cells contain the point")
    return Verdict(True, "cell partition", detail=f"{total} points", checked=total)
