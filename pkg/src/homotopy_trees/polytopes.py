"""Exact Loday associahedra and Forcey-Loday multiplihedra.

All coordinates are ``Fraction``.  Facets carry labels: ``("D", (i1, i2, i3))``
for the block-collapse facets and ``("Dhat", (i1, ..., is))`` for the
multiplihedron's composition facets.  Orientation frames are fixed:

* associahedron: ``e_j = (1, 0, .., -1 at slot j+1, .., 0)``, ``j = 1..n-2``;
* multiplihedron: ``f_j = -(unit vector j)``, ``j = 1..n-1``.

A facet's boundary sign compares ``(outward vector, pushed-forward product
frame)`` with the ambient frame.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from . import ainf
from .ainf import ID, Op, gen
from .chains import Chain, Verdict

Vec = tuple


# exact linear algebra ---------------------------------------------------------

def _rref(rows):
    m = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    n_cols = len(m[0]) if m else 0
    for c in range(n_cols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    if not rows or not rows[0]:
        return 0
    return len(_rref(rows)[1])


def solve(a_rows, b):
    """Unique solution of ``A x = b`` (possibly overdetermined) or ``None``."""
    n = len(a_rows[0]) if a_rows else 0
    aug = [list(r) + [bi] for r, bi in zip(a_rows, b)]
    if all(isinstance(v, int) or v.denominator == 1 for row in aug for v in row):
        return _solve_integral([[int(v) for v in row] for row in aug], n)
    m, piv = _rref(aug)
    if n in piv or len(piv) < n:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(m, piv):
        x[c] = row[-1]
    return tuple(x)


def _solve_integral(m, n):
    # fraction-free elimination; a single division per coordinate at the end
    rows = len(m)
    r = 0
    for c in range(n):
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            return None
        m[r], m[p] = m[p], m[r]
        pr = m[r]
        for i in range(rows):
            if i != r and m[i][c]:
                f, g = m[i][c], pr[c]
                m[i] = [g * a - f * b for a, b in zip(m[i], pr)]
        r += 1
    if any(m[i][n] for i in range(r, rows)):
        return None
    return tuple(Fraction(m[i][n], m[i][i]) for i in range(n))


def det(rows) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            out = -out
        out *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return out


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


# polytopes --------------------------------------------------------------------

@dataclass(frozen=True)
class HalfSpace:
    normal: Vec
    offset: Fraction
    relation: str  # ">=", "<=" or "="
    label: tuple = ()

    def __post_init__(self):
        if not any(self.normal):
            raise ValueError("normal vector must be nonzero")

    def holds(self, x) -> bool:
        v = _dot(self.normal, x)
        if self.relation == ">=":
            return v >= self.offset
        if self.relation == "<=":
            return v <= self.offset
        return v == self.offset

    def tight(self, x) -> bool:
        return _dot(self.normal, x) == self.offset

    def to_dict(self):
        return {
            "normal": [str(c) for c in self.normal],
            "offset": str(self.offset),
            "relation": self.relation,
            "label": _label_json(self.label),
        }


def _label_json(label):
    return [label[0], list(label[1])] if label else []


@dataclass
class HPolytope:
    kind: str
    weights: tuple
    ambient: int
    equalities: list
    halfspaces: list
    frame: list
    _vertices: list | None = field(default=None, repr=False)

    @property
    def dimension(self) -> int:
        return self.ambient - rank([h.normal for h in self.equalities]) if self.equalities else self.ambient

    @property
    def arity(self) -> int:
        return len(self.weights)

    def facet(self, label) -> HalfSpace:
        for h in self.halfspaces:
            if h.label == label:
                return h
        raise KeyError(f"no facet labelled {label!r}")

    def labels(self) -> list:
        return [h.label for h in self.halfspaces]

    def contains(self, x) -> bool:
        return all(h.holds(x) for h in self.equalities + self.halfspaces)

    def frame_coordinates(self, v) -> tuple:
        """Coordinates of a direction vector ``v`` in the orientation frame."""
        if not self.frame:
            return ()
        cols = list(zip(*self.frame))
        x = solve([list(r) for r in cols], list(v))
        if x is None:
            raise ValueError("vector is not in the span of the frame")
        return x

    def to_dict(self) -> dict:
        verts = vertices(self)
        index = {v: i for i, v in enumerate(verts)}
        return {
            "kind": self.kind,
            "weights": [str(w) for w in self.weights],
            "ambient": self.ambient,
            "dimension": self.dimension,
            "equalities": [h.to_dict() for h in self.equalities],
            "halfspaces": [h.to_dict() for h in self.halfspaces],
            "vertices": [[str(c) for c in v] for v in verts],
            "facets": [
                {"label": _label_json(h.label), "vertices": [index[v] for v in facet_vertices(self, h.label)]}
                for h in self.halfspaces
            ],
        }


def _pairs(ws, lo, hi, scale):
    # sum of w_k w_l over lo <= k < l < hi
    return scale * sum(ws[k] * ws[l] for k in range(lo, hi) for l in range(k + 1, hi))


def _indicator(size, idx):
    v = [0] * size
    for i in idx:
        v[i] = 1
    return tuple(v)


def _check_weights(ws, least):
    ws = tuple(Fraction(w) for w in ws)
    if len(ws) < least:
        raise ValueError(f"need at least {least} weights")
    if any(w <= 0 for w in ws):
        raise ValueError("weights must be positive")
    return ws


def loday(weights: Sequence, scale=1) -> HPolytope:
    """Loday realization; ``scale`` multiplies every pairwise weight product.

    ``scale=2`` realizes weights ``sqrt(2) * w`` without leaving the rationals.
    """
    ws = _check_weights(weights, 2)
    n = len(ws)
    d = n - 1
    eq = HalfSpace(_indicator(d, range(d)), _pairs(ws, 0, n, scale), "=", ("H", ()))
    hs = []
    for i2 in range(2, n):
        for i1 in range(n - i2 + 1):
            i3 = n - i1 - i2
            hs.append(HalfSpace(_indicator(d, range(i1, i1 + i2 - 1)), _pairs(ws, i1, i1 + i2, scale), ">=", ("D", (i1, i2, i3))))
    frame = []
    for j in range(1, n - 1):
        v = [0] * d
        v[0], v[j] = 1, -1
        frame.append(tuple(v))
    return HPolytope("assoc", ws, d, [eq], hs, frame)


def _compositions(n, min_parts):
    for cuts in range(min_parts - 1, n):
        for c in combinations(range(1, n), cuts):
            bounds = (0,) + c + (n,)
            yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


def forcey_loday(weights: Sequence) -> HPolytope:
    ws = _check_weights(weights, 1)
    n = len(ws)
    d = n - 1
    hs = []
    # i2 = n is included: it is the facet where the whole tree sits above the gauge
    for i2 in range(2, n + 1):
        for i1 in range(n - i2 + 1):
            i3 = n - i1 - i2
            hs.append(HalfSpace(_indicator(d, range(i1, i1 + i2 - 1)), _pairs(ws, i1, i1 + i2, 1), ">=", ("D", (i1, i2, i3))))
    for parts in _compositions(n, 2):
        starts = [0]
        for p in parts:
            starts.append(starts[-1] + p)
        big = [sum(ws[starts[t]:starts[t + 1]]) for t in range(len(parts))]
        coords = [starts[t] - 1 for t in range(1, len(parts))]
        hs.append(HalfSpace(_indicator(d, coords), _pairs(big, 0, len(big), 2), "<=", ("Dhat", parts)))
    frame = []
    for j in range(d):
        v = [0] * d
        v[j] = -1
        frame.append(tuple(v))
    return HPolytope("multipl", ws, d, [], hs, frame)


def unit_weights(n):
    return (1,) * n


def build(kind: str, weights: Sequence) -> HPolytope:
    if kind == "assoc":
        return loday(weights)
    if kind == "multipl":
        return forcey_loday(weights)
    raise ValueError(f"unknown polytope kind {kind!r}")


def vertices(p: HPolytope) -> list:
    """All vertices, sorted; exhaustive tight-subset enumeration."""
    if p._vertices is not None:
        return p._vertices
    if p.ambient > 6:
        raise ValueError("vertex enumeration is limited to ambient dimension 6")
    if p.ambient == 0:
        p._vertices = [()]
        return p._vertices
    eq_rows = [list(h.normal) for h in p.equalities]
    eq_rhs = [h.offset for h in p.equalities]
    need = p.ambient - (rank(eq_rows) if eq_rows else 0)
    found = set()
    for combo in combinations(p.halfspaces, need):
        rows = eq_rows + [list(h.normal) for h in combo]
        x = solve(rows, eq_rhs + [h.offset for h in combo])
        if x is not None and p.contains(x):
            found.add(x)
    if not found:
        raise ValueError("no vertices: the system is empty or unbounded")
    p._vertices = sorted(found)
    return p._vertices


def facet_vertices(p: HPolytope, label) -> list:
    h = p.facet(label)
    return [v for v in vertices(p) if h.tight(v)]


def facets(p: HPolytope) -> list:
    """Labels whose tight sets are genuine codimension-1 faces."""
    out = []
    for h in p.halfspaces:
        vs = facet_vertices(p, h.label)
        if vs and _affine_dim(vs) == p.dimension - 1:
            out.append(h.label)
    return out


def _affine_dim(points) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    return rank([[a - b for a, b in zip(q, base)] for q in points[1:]])


def _centroid(points):
    n = len(points)
    return tuple(sum(c) / n for c in zip(*points))


# facet embeddings -------------------------------------------------------------

@dataclass
class FacetEmbedding:
    """Coordinate interleaving from a product of smaller polytopes onto a facet.

    ``slots[i] = (factor, coordinate)`` says where output coordinate ``i``
    comes from.  The map is linear.
    """

    label: tuple
    factors: list
    slots: list

    def apply(self, parts: Sequence) -> tuple:
        return tuple(parts[f][c] for f, c in self.slots)

    def push(self, factor: int, v) -> tuple:
        return tuple(v[c] if f == factor else Fraction(0) for f, c in self.slots)

    def pushed_frame(self) -> list:
        out = []
        for i, q in enumerate(self.factors):
            out.extend(self.push(i, v) for v in q.frame)
        return out

    def image_vertices(self) -> set:
        return {self.apply(parts) for parts in product(*[vertices(q) for q in self.factors])}


def facet_embedding(p: HPolytope, label) -> FacetEmbedding:
    kind, data = label
    ws = p.weights
    if kind == "D":
        i1, i2, i3 = data
        outer = ws[:i1] + (sum(ws[i1:i1 + i2]),) + ws[i1 + i2:]
        inner = ws[i1:i1 + i2]
        first = loday(outer) if p.kind == "assoc" else forcey_loday(outer)
        slots = [(0, c) for c in range(i1)] + [(1, c) for c in range(i2 - 1)] + [(0, i1 + c) for c in range(i3)]
        return FacetEmbedding(label, [first, loday(inner)], slots)
    if kind == "Dhat" and p.kind == "multipl":
        parts = data
        starts = [0]
        for q in parts:
            starts.append(starts[-1] + q)
        big = tuple(sum(ws[starts[t]:starts[t + 1]]) for t in range(len(parts)))
        factors = [loday(big, scale=2)] + [forcey_loday(ws[starts[t]:starts[t + 1]]) for t in range(len(parts))]
        slots = []
        for t, q in enumerate(parts):
            slots.extend((t + 1, c) for c in range(q - 1))
            if t < len(parts) - 1:
                slots.append((0, t))
        return FacetEmbedding(label, factors, slots)
    raise ValueError(f"invalid facet label {label!r} for {p.kind}")


def check_embedding(p: HPolytope, label) -> bool:
    """The embedding maps the product's vertices exactly onto the facet's."""
    emb = facet_embedding(p, label)
    image = emb.image_vertices()
    h = p.facet(label)
    if not all(h.tight(v) for v in image):
        return False
    dims = sum(q.dimension for q in emb.factors)
    return image == set(facet_vertices(p, label)) and dims == p.dimension - 1


def outward_vector(p: HPolytope, label) -> tuple:
    """Facet centroid minus polytope centroid: points out through the facet."""
    vs = vertices(p)
    fv = facet_vertices(p, label)
    a, b = _centroid(fv), _centroid(vs)
    return tuple(x - y for x, y in zip(a, b))


def _gradient_outward(p: HPolytope, label) -> tuple:
    # steepest decrease of the constraint, as frame coordinates
    h = p.facet(label)
    g = [_dot(h.normal, v) for v in p.frame]
    if h.relation == ">=":
        return tuple(-x for x in g)
    return tuple(g)


def facet_determinant(p: HPolytope, label, nu=None) -> Fraction:
    """``det(nu, pushed frame)`` in the ambient frame's coordinates.

    ``nu`` is given in frame coordinates; by default it is the constraint's
    gradient normal, which makes the value comparable with closed forms.
    """
    if nu is None:
        nu = _gradient_outward(p, label)
    emb = facet_embedding(p, label)
    cols = [tuple(nu)] + [p.frame_coordinates(v) for v in emb.pushed_frame()]
    return det(cols)


def facet_sign(p: HPolytope, label) -> int:
    """Orientation sign from the actual geometry (centroid outward vector)."""
    nu = p.frame_coordinates(outward_vector(p, label))
    d = facet_determinant(p, label, nu)
    if d == 0:
        raise ArithmeticError(f"degenerate frame at facet {label!r}")
    return 1 if d > 0 else -1


def closed_form(kind: str, label) -> int:
    tag, data = label
    if tag == "D":
        i1, i2, i3 = data
        if kind == "assoc":
            if i1 == 0:
                return -i3 * (-1) ** (i2 * i3)
            return -(i2 - 1) * (-1) ** (i1 + i2 * i3)
        return (i2 - 1) * (-1) ** (i1 + i2 * i3)
    s = len(data)
    return -(s - 1) * (-1) ** ainf.epsilon(data, "B")


def facet_monomial(kind: str, label) -> Op:
    tag, data = label
    if tag == "D":
        i1, i2, i3 = data
        head = "m" if kind == "assoc" else "f"
        return Op(head, [ID] * i1 + [gen("m", i2)] + [ID] * i3)
    return Op("m", [gen("f", i) for i in data])


def cellular_boundary(p: HPolytope) -> Chain:
    """Signed facet sum, each facet read as the composite it realizes."""
    return Chain.from_items(
        [(facet_monomial(p.kind, label), facet_sign(p, label)) for label in facets(p)],
        None,
    )


def check_signs(kind: str, n: int) -> Verdict:
    p = build(kind, unit_weights(n))
    name = f"{kind} n={n} facet signs"
    for label in facets(p):
        g = facet_sign(p, label)
        v = facet_determinant(p, label)
        c = closed_form(kind, label)
        if v != c or (g > 0) != (c > 0):
            return Verdict(False, name, witness=label, detail=f"geometric {g}, determinant {v}, closed form {c}")
    ref = ainf.ainf_diff(n, "B") if kind == "assoc" else ainf.ainf_morph_diff(n, "B")
    bd = cellular_boundary(p)
    if Chain(bd.terms) != Chain(ref.terms):
        return Verdict(False, name, witness=ainf.format_chain(Chain(bd.terms) - Chain(ref.terms)), detail="boundary differs from differential")
    return Verdict(True, name, detail=f"{len(facets(p))} facets")


# export -----------------------------------------------------------------------

def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_vertex(v) -> str:
    return "(" + ",".join(_fmt(c) for c in v) + ")"


def to_json(p: HPolytope) -> str:
    return json.dumps(p.to_dict(), indent=2)


def to_text(p: HPolytope) -> str:
    """Plain vertex/facet listing: ``v`` lines, then ``f label : indices``."""
    verts = vertices(p)
    index = {v: i for i, v in enumerate(verts)}
    out = [f"# {p.kind} weights={','.join(_fmt(w) for w in p.weights)} dim={p.dimension}"]
    out += ["v " + " ".join(_fmt(c) for c in v) for v in verts]
    for label in facets(p):
        idx = " ".join(str(index[v]) for v in facet_vertices(p, label))
        out.append(f"f {label[0]}{','.join(map(str, label[1]))} : {idx}")
    return "\n".join(out)
