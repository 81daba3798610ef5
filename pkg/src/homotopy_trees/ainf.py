"""Symbolic A-infinity algebras and morphisms.

Composites of generators are planar trees whose vertices carry a label:
``m`` for algebra operations (degree ``2 - arity``) and ``f``, ``g`` or a
placeholder ``h`` for morphism components (degree ``1 - arity``).  A
monomial stands for the composite taken with its vertices in depth-first
order; any other order differs by the Koszul sign of the permutation, and
every routine here reduces to depth-first order through
:func:`substitute` or :func:`compose_op`.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Sequence

from . import ombas
from .chains import Chain, Verdict
from .trees import LEAF, splice_sign

MORPH_LABELS = ("f", "g", "h")


class Op:
    """A labelled planar tree; a leaf has label ``None``."""

    __slots__ = ("label", "children", "arity", "_hash")

    def __init__(self, label: str | None = None, children: Sequence["Op"] = ()):
        self.label = label
        self.children = tuple(children)
        if label is None and self.children:
            raise ValueError("a leaf has no children")
        if label is not None and not self.children:
            raise ValueError("a vertex needs at least one input")
        self.arity = sum(c.arity for c in self.children) if self.children else 1
        self._hash = hash((label, self.children))

    def __eq__(self, other):
        return (
            isinstance(other, Op)
            and self._hash == other._hash
            and self.label == other.label
            and self.children == other.children
        )

    def __hash__(self):
        return self._hash

    def sort_key(self):
        if self.label is None:
            return ()
        return (self.label, len(self.children)) + tuple(c.sort_key() for c in self.children)

    @property
    def is_leaf(self) -> bool:
        return self.label is None

    def vertices(self) -> list["Op"]:
        out = []

        def go(x):
            if not x.is_leaf:
                out.append(x)
                for c in x.children:
                    go(c)

        go(self)
        return out

    @property
    def degree(self) -> int:
        return sum(vertex_degree(v.label, len(v.children)) for v in self.vertices())

    def trace(self) -> str:
        """Preorder trace with ``E`` for odd vertices and ``L`` for leaves.

        Even vertices never contribute Koszul signs and are skipped.
        """
        out = []

        def go(x):
            if x.is_leaf:
                out.append("L")
                return
            if vertex_degree(x.label, len(x.children)) % 2:
                out.append("E")
            for c in x.children:
                go(c)

        go(self)
        return "".join(out)

    def __repr__(self):
        return format_op(self)

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"op": None}
        return {"op": self.label, "children": [c.to_dict() for c in self.children]}

    @classmethod
    def from_dict(cls, d: dict) -> "Op":
        if d["op"] is None:
            return ID
        return cls(d["op"], [cls.from_dict(c) for c in d["children"]])


ID = Op()


def vertex_degree(label: str, arity: int) -> int:
    if label == "m":
        return 2 - arity
    if label in MORPH_LABELS:
        return 1 - arity
    raise ValueError(f"unknown generator label {label!r}")


def gen(label: str, n: int) -> Op:
    return Op(label, [ID] * n)


def format_op(x: Op) -> str:
    """Composition-word notation, e.g. ``m2(id⊗m2)`` or ``m2(f1⊗f2)``."""
    if x.is_leaf:
        return "id"
    head = f"{x.label}{len(x.children)}"
    if all(c.is_leaf for c in x.children):
        return head
    parts = []
    run = 0
    for c in x.children:
        if c.is_leaf:
            run += 1
            continue
        if run:
            parts.append("id" if run == 1 else f"id^{run}")
            run = 0
        parts.append(format_op(c))
    if run:
        parts.append("id" if run == 1 else f"id^{run}")
    return head + "(" + "⊗".join(parts) + ")"


def format_chain(x: Chain) -> str:
    if not x:
        return "0"
    out = []
    for k, c in x.sorted_items():
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        out.append(f"{sign} {mag}{format_op(k)}")
    s = " ".join(out)
    return s[2:] if s.startswith("+ ") else s


def _parity_of(order: list[tuple[int, int]]) -> int:
    """Koszul sign of listing ``(rank, degree)`` pairs in this order."""
    odd = [r for r, d in order if d % 2]
    inv = sum(1 for a in range(len(odd)) for b in range(a + 1, len(odd)) if odd[a] > odd[b])
    return -1 if inv % 2 else 1


def substitute(M: Op, k: int, R: Op) -> tuple[int, Op]:
    """Replace vertex ``k`` (preorder) of ``M`` by the composite ``R``.

    ``R`` must have the arity of that vertex.  The sign sorts the order
    ``(v_0..v_{k-1}, R's vertices, v_{k+1}..)`` into preorder.
    """
    n_r = len(R.vertices())
    counter = iter(range(10**9))
    emitted: list[tuple[int, int]] = []

    def build(x):
        if x.is_leaf:
            return x
        idx = next(counter)
        if idx != k:
            rank = idx if idx < k else idx - 1 + n_r
            emitted.append((rank, vertex_degree(x.label, len(x.children))))
            return Op(x.label, [build(c) for c in x.children])
        if len(x.children) != R.arity:
            raise ValueError("replacement arity mismatch")
        inputs = iter(x.children)
        rc = iter(range(n_r))

        # R's vertices are emitted in preorder, interleaved with the subtrees
        # hanging off its leaves, exactly as they appear in the result
        def go(z):
            if z.is_leaf:
                return build(next(inputs))
            emitted.append((k + next(rc), vertex_degree(z.label, len(z.children))))
            return Op(z.label, [go(c) for c in z.children])

        return go(R)

    result = build(M)
    return _parity_of(emitted), result


def compose_op(outer: Op, subs: Sequence[Op | None]) -> tuple[int, Op]:
    """``outer(subs...)`` with concatenated vertex order, reduced to preorder."""
    if len(subs) != outer.arity:
        raise ValueError("one input per leaf")
    sign, _ = splice_sign(outer.trace(), [None if s is None or s.is_leaf else s.trace() for s in subs])
    it = iter(subs)

    def go(x):
        if x.is_leaf:
            s = next(it)
            return ID if s is None else s
        return Op(x.label, [go(c) for c in x.children])

    return sign, go(outer)


# generator differentials -----------------------------------------------------

def _check_conv(conv: str) -> str:
    conv = conv.upper()
    if conv not in ("A", "B"):
        raise ValueError("convention must be 'A' or 'B'")
    return conv


def _triple_sign(conv, i1, i2, i3) -> int:
    e = i1 * i2 + i3 if conv == "A" else i1 + i2 * i3
    return -1 if e % 2 else 1


def epsilon(parts: Sequence[int], conv: str = "B") -> int:
    """Parity exponent for ``m_s(f_{i_1} ⊗ ... ⊗ f_{i_s})``."""
    s = len(parts)
    if _check_conv(conv) == "B":
        return sum((s - u) * (1 - i) for u, i in enumerate(parts, start=1))
    return sum(i * sum(1 - t for t in parts[u + 1:]) for u, i in enumerate(parts))


def _compositions(n, min_parts=1):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            if 1 + len(rest) >= min_parts:
                yield (first,) + rest


@lru_cache(maxsize=None)
def ainf_diff(n: int, conv: str = "B") -> Chain:
    """Differential of ``m_n`` as a sum of two-vertex composites."""
    conv = _check_conv(conv)
    if n < 2:
        raise ValueError("m_n is defined for n >= 2")
    items = []
    for i2 in range(2, n):
        for i1 in range(n - i2 + 1):
            i3 = n - i1 - i2
            slots = [ID] * i1 + [gen("m", i2)] + [ID] * i3
            items.append((Op("m", slots), -_triple_sign(conv, i1, i2, i3)))
    return Chain.from_items(items, 3 - n)


@lru_cache(maxsize=None)
def ainf_morph_diff(n: int, conv: str = "B", label: str = "f") -> Chain:
    """Differential of the morphism component of arity ``n``."""
    conv = _check_conv(conv)
    if n < 1:
        raise ValueError("morphism components start at arity 1")
    items = []
    for i2 in range(2, n + 1):
        for i1 in range(n - i2 + 1):
            i3 = n - i1 - i2
            slots = [ID] * i1 + [gen("m", i2)] + [ID] * i3
            items.append((Op(label, slots), _triple_sign(conv, i1, i2, i3)))
    for parts in _compositions(n, 2):
        e = epsilon(parts, conv)
        items.append((Op("m", [gen(label, i) for i in parts]), 1 if e % 2 else -1))
    return Chain.from_items(items, 2 - n)


def generator_diff(label: str, n: int, conv: str = "B") -> Chain:
    if label == "m":
        return ainf_diff(n, conv)
    if label in ("f", "g"):
        return ainf_morph_diff(n, conv, label)
    raise ValueError(f"no differential for {label!r}")


def diff_op(M: Op, conv: str = "B") -> Chain:
    """Apply the differential as a derivation over the vertices of ``M``."""
    out = Chain()
    acc = 0
    for k, v in enumerate(M.vertices()):
        koz = -1 if acc % 2 else 1
        for R, c in generator_diff(v.label, len(v.children), conv).items():
            s, y = substitute(M, k, R)
            out = out + Chain.basis(y, None, koz * c * s)
        acc += vertex_degree(v.label, len(v.children))
    return Chain(out.terms, M.degree + 1)


def diff_op_chain(x: Chain, conv: str = "B") -> Chain:
    out = Chain()
    for k, c in x.items():
        out = out + diff_op(k, conv) * c
    return out


def dsq_ainf(n: int, conv: str = "B") -> Verdict:
    r = diff_op_chain(ainf_diff(n, conv), conv)
    return Verdict(not r, f"d^2 m_{n} = 0 ({conv})", witness=None if not r else format_chain(r))


def dsq_ainf_morph(n: int, conv: str = "B") -> Verdict:
    r = diff_op_chain(ainf_morph_diff(n, conv), conv)
    return Verdict(not r, f"d^2 f_{n} = 0 ({conv})", witness=None if not r else format_chain(r))


# conventions -----------------------------------------------------------------

def twist_sign(n: int) -> int:
    return -1 if (n * (n - 1) // 2) % 2 else 1


def twist(x: Chain) -> Chain:
    """Rescale every generator by ``(-1)**C(arity, 2)``."""
    out = {}
    for M, c in x.items():
        s = 1
        for v in M.vertices():
            s *= twist_sign(len(v.children))
        out[M] = c * s
    return Chain(out, x.degree)


def convert_convention(n: int, morphism: bool = False) -> Verdict:
    """Check that the twist carries the (A) differential onto the (B) one."""
    if morphism:
        a, b = ainf_morph_diff(n, "A"), ainf_morph_diff(n, "B")
    else:
        a, b = ainf_diff(n, "A"), ainf_diff(n, "B")
    lhs = twist(a) * twist_sign(n)
    name = f"twist {'f' if morphism else 'm'}_{n}: A -> B"
    return Verdict(lhs == b, name, witness=None if lhs == b else format_chain(lhs - b))


# composition of morphisms ----------------------------------------------------

@lru_cache(maxsize=None)
def compose_ainf_morphisms(n: int) -> Chain:
    """``(g∘f)_n`` as a formal sum of ``g_s(f_{i_1}⊗...⊗f_{i_s})``."""
    items = []
    for parts in _compositions(n):
        e = epsilon(parts, "B")
        items.append((Op("g", [gen("f", i) for i in parts]), -1 if e % 2 else 1))
    return Chain.from_items(items, 1 - n)


def _expand_h(x: Chain) -> Chain:
    """Replace every ``h`` vertex by the formal composite ``(g∘f)``."""
    out = Chain()
    work = list(x.items())
    while work:
        M, c = work.pop()
        verts = M.vertices()
        k = next((i for i, v in enumerate(verts) if v.label == "h"), None)
        if k is None:
            out = out + Chain.basis(M, None, c)
            continue
        for R, d in compose_ainf_morphisms(len(verts[k].children)).items():
            s, y = substitute(M, k, R)
            work.append((y, c * d * s))
    return out


def check_composition(n: int) -> Verdict:
    """The composite satisfies the (B) morphism equation in arity ``n``."""
    lhs = diff_op_chain(compose_ainf_morphisms(n), "B")
    rhs = _expand_h(ainf_morph_diff(n, "B", "h"))
    diff = Chain(lhs.terms) - Chain(rhs.terms)
    return Verdict(not diff, f"(g∘f)_{n} is a morphism", witness=None if not diff else format_chain(diff))


# comparison maps to the tree models ------------------------------------------

def phi_op(M: Op) -> Chain:
    """Image of an ``m``-composite: binary-tree sums grafted with broken edges."""
    if M.is_leaf:
        return Chain({LEAF: 1}, 0)
    if M.label != "m":
        raise ValueError("only m-composites map into the operad")
    subs = [None if c.is_leaf else phi_op(c) for c in M.children]
    out: dict = {}
    root = ombas.phi_generator(len(M.children))
    choices = [[(None, 1)] if s is None else list(s.items()) for s in subs]
    for t, c in root.items():
        for combo in product(*choices):
            sign, u = ombas.compose_all(t, [x for x, _ in combo])
            coeff = c * sign
            for _, d in combo:
                coeff *= d
            out[u] = out.get(u, 0) + coeff
    return Chain(out, M.degree)


def phi_chain(x: Chain) -> Chain:
    out = Chain()
    for M, c in x.items():
        out = out + phi_op(M) * c
    return Chain(out.terms, x.degree)


def psi_op(M: Op) -> Chain:
    """Image of a morphism composite (exactly one ``f`` on each root path)."""
    if M.is_leaf:
        raise ValueError("a bare identity is not a morphism composite")
    if M.label == "f":
        tops = [None if c.is_leaf else phi_op(c) for c in M.children]
        choices = [[(None, 1)] if s is None else list(s.items()) for s in tops]
        out: dict = {}
        for x, c in ombas.psi_generator(len(M.children)).items():
            for combo in product(*choices):
                sign, y = ombas.action_right_all(x, [u for u, _ in combo])
                coeff = c * sign
                for _, d in combo:
                    coeff *= d
                out[y] = out.get(y, 0) + coeff
        return Chain(out, M.degree)
    if M.label != "m":
        raise ValueError(f"unexpected label {M.label!r}")
    ins = [psi_op(c) for c in M.children]
    out = {}
    for t, c in ombas.phi_generator(len(M.children)).items():
        for combo in product(*[list(s.items()) for s in ins]):
            sign, y = ombas.action_left_sign(t, [x for x, _ in combo])
            coeff = c * sign
            for _, d in combo:
                coeff *= d
            out[y] = out.get(y, 0) + coeff
    return Chain(out, M.degree)


def psi_chain(x: Chain) -> Chain:
    out = Chain()
    for M, c in x.items():
        out = out + psi_op(M) * c
    return Chain(out.terms, x.degree)


def phi_ainf_to_ombas(n: int) -> Chain:
    return ombas.phi_generator(n)


def psi_ainfmorph_to_ombasmorph(n: int) -> Chain:
    return ombas.psi_generator(n)


def check_chain_map_phi(max_arity: int) -> Verdict:
    for n in range(2, max_arity + 1):
        lhs = ombas.diff_ombas_chain(ombas.phi_generator(n))
        rhs = phi_chain(ainf_diff(n, "B"))
        if Chain(lhs.terms) != Chain(rhs.terms):
            return Verdict(False, "phi is a chain map", witness=n, detail=f"residual {Chain(lhs.terms) - Chain(rhs.terms)!r}")
    return Verdict(True, "phi is a chain map", detail=f"arity <= {max_arity}")


def check_chain_map_psi(max_arity: int) -> Verdict:
    for n in range(1, max_arity + 1):
        lhs = ombas.diff_morph_chain(ombas.psi_generator(n))
        rhs = psi_chain(ainf_morph_diff(n, "B"))
        if Chain(lhs.terms) != Chain(rhs.terms):
            return Verdict(False, "psi is a chain map", witness=n, detail=f"residual {Chain(lhs.terms) - Chain(rhs.terms)!r}")
    return Verdict(True, "psi is a chain map", detail=f"arity <= {max_arity}")
