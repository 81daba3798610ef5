"""Concrete interpretations on finite graded integer modules.

A multilinear map of arity ``k`` from ``A`` to ``B`` is a dense integer
array of shape ``(dim A,)*k + (dim B,)``: entry ``[a_1, ..., a_k, b]`` is the
coefficient of basis vector ``b`` in the image of ``(a_1, ..., a_k)``.
Composition follows the Koszul rule: plugging ``g`` into slot ``i`` of ``f``
costs ``(-1)**(|g| * (|a_1| + ... + |a_{i-1}|))``.

Relation checkers evaluate the formal differentials produced by the tree
modules; they never restate a sign formula of their own.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from . import ainf, ombas
from .chains import Chain, Verdict
from .trees import (
    TRIVIAL,
    BrokenGaugedTree,
    GaugedTree,
    RibbonTree,
    Side,
    corolla,
    enumerate_gauged_trees,
    enumerate_stable_trees,
    tree_from_dict,
    tree_to_dict,
)


class MissingTable(KeyError):
    """An operation outside the instance's declared arity bound was needed."""


@dataclass
class GradedModule:
    degrees: tuple
    d: np.ndarray

    def __post_init__(self):
        self.degrees = tuple(int(x) for x in self.degrees)
        n = len(self.degrees)
        self.d = np.asarray(self.d, dtype=np.int64).reshape(n, n)
        for i, j in zip(*np.nonzero(self.d)):
            if self.degrees[i] != self.degrees[j] + 1:
                raise ValueError(f"differential entry ({i},{j}) does not raise degree by one")
        if np.any(self.d @ self.d):
            raise ValueError("differential does not square to zero")

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @property
    def parity(self) -> np.ndarray:
        return np.array(self.degrees, dtype=np.int64) % 2

    def twisted_d(self, twist) -> np.ndarray:
        """``(-1)**((twist+1)*k) * d`` on degree-``k`` inputs; ``None`` disables it."""
        if twist is None:
            return self.d
        signs = np.array([(-1) ** (((twist + 1) * k) % 2) for k in self.degrees], dtype=np.int64)
        return self.d * signs[None, :]

    def to_dict(self):
        return {"degrees": list(self.degrees), "differential": self.d.tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls(d["degrees"], d["differential"])


def zero_map(src: GradedModule, dst: GradedModule, k: int) -> np.ndarray:
    return np.zeros((src.dim,) * k + (dst.dim,), dtype=np.int64)


def identity_map(m: GradedModule) -> np.ndarray:
    return np.eye(m.dim, dtype=np.int64)


def map_degree(table: np.ndarray, src: GradedModule, dst: GradedModule):
    """The common degree of all nonzero entries, or ``None`` for the zero map."""
    degs = set()
    for idx in zip(*np.nonzero(table)):
        degs.add(dst.degrees[idx[-1]] - sum(src.degrees[i] for i in idx[:-1]))
    if len(degs) > 1:
        raise ValueError(f"inhomogeneous table with degrees {sorted(degs)}")
    return degs.pop() if degs else None


def _koszul(parity: np.ndarray, n_before: int) -> np.ndarray:
    # (-1)**(sum of input parities) over the first n_before axes
    if n_before == 0:
        return np.array(1, dtype=np.int64)
    s = np.zeros((len(parity),) * n_before, dtype=np.int64)
    for ax in range(n_before):
        shape = [1] * n_before
        shape[ax] = len(parity)
        s = s + parity.reshape(shape)
    return np.where(s % 2, -1, 1).astype(np.int64)


def compose_at(f: np.ndarray, i: int, g: np.ndarray, g_degree: int, in_parity: np.ndarray) -> np.ndarray:
    """``f o_i g`` (0-based slot) with the Koszul sign of ``g`` passing earlier inputs."""
    m = g.ndim - 1
    r = np.tensordot(g, f, axes=([m], [i]))
    r = np.moveaxis(r, list(range(m)), list(range(i, i + m)))
    if g_degree % 2 and i:
        sign = _koszul(in_parity, i).reshape(r.shape[:i] + (1,) * (r.ndim - i))
        r = r * sign
    return r


def compose_all(f: np.ndarray, subs: Sequence, in_parity: np.ndarray) -> np.ndarray:
    """``f(g_1 (x) ... (x) g_k)``; ``subs`` holds ``(table, degree)`` or ``None``."""
    out = f
    slot = 0
    for s in subs:
        if s is None:
            slot += 1
            continue
        g, deg = s
        out = compose_at(out, slot, g, deg, in_parity)
        slot += g.ndim - 1
    return out


def postcompose(d: np.ndarray, f: np.ndarray) -> np.ndarray:
    return np.tensordot(f, d, axes=([f.ndim - 1], [1]))


def bracket(f: np.ndarray, degree: int, d_in: np.ndarray, d_out: np.ndarray, in_parity: np.ndarray) -> np.ndarray:
    """``d_out f - (-1)**|f| sum_i f o_i d_in``."""
    out = postcompose(d_out, f)
    inner = np.zeros_like(out)
    for i in range(f.ndim - 1):
        inner = inner + compose_at(f, i, d_in.T, 1, in_parity)
    sign = -1 if degree % 2 else 1
    return out - sign * inner


# instances -------------------------------------------------------------------

@dataclass
class AlgebraInstance:
    """Tables ``m_t`` for unbroken stable trees up to ``max_arity``; absent ones are zero."""

    module: GradedModule
    ops: dict
    max_arity: int
    twist: int | None = None

    def __post_init__(self):
        for t, table in self.ops.items():
            arr = np.asarray(table, dtype=np.int64)
            if arr.shape != (self.module.dim,) * (t.arity + 1):
                raise ValueError(f"table for {t.word()} has shape {arr.shape}")
            deg = map_degree(arr, self.module, self.module)
            if deg is not None and deg != ombas.degree(t):
                raise ValueError(f"table for {t.word()} has degree {deg}, expected {ombas.degree(t)}")
            self.ops[t] = arr

    def table(self, t: RibbonTree) -> np.ndarray:
        if t.arity > self.max_arity:
            raise MissingTable(t.word())
        if t in self.ops:
            return self.ops[t]
        return zero_map(self.module, self.module, t.arity)

    @property
    def d1(self):
        return self.module.d

    @property
    def d2(self):
        return self.module.twisted_d(self.twist)


@dataclass
class AInfInstance:
    module: GradedModule
    ops: dict
    max_arity: int
    twist: int | None = None

    def __post_init__(self):
        for k, table in list(self.ops.items()):
            arr = np.asarray(table, dtype=np.int64)
            if arr.shape != (self.module.dim,) * (k + 1):
                raise ValueError(f"table for m_{k} has shape {arr.shape}")
            deg = map_degree(arr, self.module, self.module)
            if deg is not None and deg != 2 - k:
                raise ValueError(f"m_{k} has degree {deg}, expected {2 - k}")
            self.ops[k] = arr

    def table(self, k: int) -> np.ndarray:
        if k > self.max_arity:
            raise MissingTable(f"m_{k}")
        return self.ops.get(k, zero_map(self.module, self.module, k))


@dataclass
class MorphismInstance:
    source: AlgebraInstance
    target: AlgebraInstance
    ops: dict
    max_arity: int

    def __post_init__(self):
        for tg, table in self.ops.items():
            arr = np.asarray(table, dtype=np.int64)
            if arr.shape != (self.source.module.dim,) * tg.arity + (self.target.module.dim,):
                raise ValueError(f"table for {tg!r} has shape {arr.shape}")
            deg = map_degree(arr, self.source.module, self.target.module)
            if deg is not None and deg != tg.degree:
                raise ValueError(f"table for {tg!r} has degree {deg}, expected {tg.degree}")
            self.ops[tg] = arr

    def table(self, tg: GaugedTree) -> np.ndarray:
        if tg.arity > self.max_arity:
            raise MissingTable(repr(tg))
        return self.ops.get(tg, zero_map(self.source.module, self.target.module, tg.arity))


# evaluation ------------------------------------------------------------------

def _eval_tree(t: RibbonTree, inst: AlgebraInstance) -> np.ndarray:
    if t.is_leaf:
        return identity_map(inst.module)
    top, hanging = t.split_root()
    if all(h is None for h in hanging):
        return inst.table(top)
    sign, back = ombas.compose_all(top, hanging)
    assert back == t.rooted()
    subs = [None if h is None else (_eval_tree(h, inst), ombas.degree(h)) for h in hanging]
    return sign * compose_all(inst.table(top), subs, inst.module.parity)


def _eval_morph(x: BrokenGaugedTree, mi: MorphismInstance) -> np.ndarray:
    if x.bottom is not None:
        blocks = [BrokenGaugedTree(None, [b]) for b in x.blocks]
        sign, back = ombas.action_left_sign(x.bottom, blocks)
        assert back == x
        subs = [(_eval_morph(b, mi), ombas.degree_morph(b)) for b in blocks]
        return sign * compose_all(_eval_tree(x.bottom, mi.target), subs, mi.source.module.parity)
    (block,) = x.blocks
    base = mi.table(block.gauge)
    if all(t.is_leaf for t in block.tops):
        return base
    sign, back = ombas.action_right_all(BrokenGaugedTree.of(block.gauge), list(block.tops))
    assert back == x
    subs = [None if t.is_leaf else (_eval_tree(t, mi.source), ombas.degree(t)) for t in block.tops]
    return sign * compose_all(base, subs, mi.source.module.parity)


def _eval_op(M: ainf.Op, inst: AInfInstance) -> np.ndarray:
    if M.is_leaf:
        return identity_map(inst.module)
    subs = [None if c.is_leaf else (_eval_op(c, inst), c.degree) for c in M.children]
    return compose_all(inst.table(len(M.children)), subs, inst.module.parity)


def operation(x: Chain, inst) -> np.ndarray:
    """The multilinear map of a homogeneous chain of fixed arity."""
    out = None
    for k, c in x.items():
        if isinstance(inst, MorphismInstance):
            v = _eval_morph(k if isinstance(k, BrokenGaugedTree) else BrokenGaugedTree.of(k), inst)
        elif isinstance(inst, AInfInstance):
            v = _eval_op(k, inst)
        else:
            v = _eval_tree(k, inst)
        out = c * v if out is None else out + c * v
    if out is None:
        raise ValueError("cannot infer the arity of the zero chain")
    return out


def evaluate(x: Chain, inst, inputs: Sequence[int]) -> np.ndarray:
    """Image of the basis tuple ``inputs``; the zero chain maps to zero."""
    if not x:
        dim = inst.target.module.dim if isinstance(inst, MorphismInstance) else inst.module.dim
        return np.zeros(dim, dtype=np.int64)
    return operation(x, inst)[tuple(inputs)]


def _first_bad(residual: np.ndarray):
    idx = np.argwhere(residual)
    return None if len(idx) == 0 else tuple(int(i) for i in idx[0])


# relation checkers -----------------------------------------------------------

def check_twisted_ombas_algebra(inst: AlgebraInstance, max_arity: int) -> Verdict:
    par = inst.module.parity
    count = 0
    for n in range(2, max_arity + 1):
        for t in enumerate_stable_trees(n):
            count += 1
            lhs = bracket(inst.table(t), ombas.degree(t), inst.d1, inst.d2, par)
            dt = ombas.diff_ombas(t)
            rhs = operation(dt, inst) if dt else np.zeros_like(lhs)
            bad = _first_bad(lhs - rhs)
            if bad is not None:
                return Verdict(False, "twisted ΩBAs-algebra", witness=(t.word(), bad[:-1], bad[-1]), detail=f"arity {n}")
    return Verdict(True, "twisted ΩBAs-algebra", detail=f"{count} trees up to arity {max_arity}", checked=count)


def _morph_bracket(mi: MorphismInstance, tg: GaugedTree):
    return bracket(mi.table(tg), tg.degree, mi.source.d1, mi.target.d2, mi.source.module.parity)


def check_twisted_ombas_morphism(mi: MorphismInstance, max_arity: int) -> Verdict:
    count = 0
    for n in range(1, max_arity + 1):
        for tg in enumerate_gauged_trees(n):
            count += 1
            lhs = _morph_bracket(mi, tg)
            dx = ombas.diff_gauged(tg)
            rhs = operation(dx, mi) if dx else np.zeros_like(lhs)
            bad = _first_bad(lhs - rhs)
            if bad is not None:
                return Verdict(False, "twisted ΩBAs-morphism", witness=(repr(tg), bad[:-1], bad[-1]), detail=f"arity {n}")
    return Verdict(True, "twisted ΩBAs-morphism", detail=f"{count} gauged trees up to arity {max_arity}", checked=count)


def ainf_residual(inst: AInfInstance, n: int, conv: str = "B") -> np.ndarray:
    lhs = bracket(inst.table(n), 2 - n, inst.module.d, inst.module.twisted_d(inst.twist), inst.module.parity)
    dm = ainf.ainf_diff(n, conv)
    rhs = operation(dm, inst) if dm else np.zeros_like(lhs)
    return lhs - rhs


def check_ainf_algebra(inst: AInfInstance, conv: str = "B", max_arity: int = 4) -> Verdict:
    for n in range(2, max_arity + 1):
        bad = _first_bad(ainf_residual(inst, n, conv))
        if bad is not None:
            return Verdict(False, f"A∞-algebra ({conv})", witness=(n, bad[:-1], bad[-1]))
    return Verdict(True, f"A∞-algebra ({conv})", detail=f"arity <= {max_arity}")


def twist_tables(inst: AInfInstance) -> AInfInstance:
    """Rescale ``m_n`` by ``(-1)**C(n, 2)``."""
    return AInfInstance(inst.module, {k: ainf.twist_sign(k) * v for k, v in inst.ops.items()}, inst.max_arity, inst.twist)


def check_convention_equivalence(inst: AInfInstance, max_arity: int) -> Verdict:
    """Residuals transform by the twist: ``R_B(twisted) = c_n R_A``, for any tables."""
    tw = twist_tables(inst)
    for n in range(2, max_arity + 1):
        a = ainf_residual(inst, n, "A")
        b = ainf_residual(tw, n, "B")
        if np.any(b - ainf.twist_sign(n) * a):
            return Verdict(False, "convention equivalence", witness=n)
    return Verdict(True, "convention equivalence", detail=f"arity <= {max_arity}")


# stock instances -------------------------------------------------------------

def product_table(m: GradedModule, mult: Mapping, k: int) -> np.ndarray:
    """k-fold product from a table of binary products ``{(i, j): {out: coeff}}``."""
    dim = m.dim
    two = np.zeros((dim, dim, dim), dtype=np.int64)
    for (i, j), outs in mult.items():
        for o, c in outs.items():
            two[i, j, o] = c
    out = np.eye(dim, dtype=np.int64)
    for _ in range(k - 1):
        # left-nested: ((a1 a2) a3) ...; fine for associative, degree-0 products
        out = compose_at(two, 0, out, 0, m.parity)
    return out


def associative_instance(module: GradedModule, mult: Mapping, max_arity: int, twist=None) -> AlgebraInstance:
    """Every corolla acts by the iterated product; trees with edges act by zero."""
    ops = {corolla(k): product_table(module, mult, k) for k in range(2, max_arity + 1)}
    return AlgebraInstance(module, ops, max_arity, twist)


def dga_ainf_instance(module: GradedModule, mult: Mapping, max_arity: int) -> AInfInstance:
    return AInfInstance(module, {2: product_table(module, mult, 2)}, max_arity)


def algebra_map_instance(src: AlgebraInstance, dst: AlgebraInstance, f, max_arity: int, sign: int = 1) -> MorphismInstance:
    """A strict algebra map: ``f`` on the trivial tree and ``sign * f o product`` on ON corollas.

    ``f`` is a table of shape ``(dim src, dim dst)``.
    """
    ops = {TRIVIAL: np.asarray(f, dtype=np.int64)}
    for k in range(2, max_arity + 1):
        c = GaugedTree(corolla(k), [Side.ON])
        ops[c] = sign * postcompose(np.asarray(f, dtype=np.int64).T, src.table(corolla(k)))
    return MorphismInstance(src, dst, ops, max_arity)


def matrix_algebra_module() -> tuple[GradedModule, dict]:
    """Cochains on an interval: ``e11, e22`` in degree 0, ``e12`` in degree 1."""
    d = np.zeros((3, 3), dtype=np.int64)
    d[2, 0], d[2, 1] = 1, -1
    mult = {(0, 0): {0: 1}, (0, 2): {2: 1}, (2, 1): {2: 1}, (1, 1): {1: 1}}
    return GradedModule((0, 0, 1), d), mult


def trivial_module(dim: int = 3) -> GradedModule:
    return GradedModule((0,) * dim, np.zeros((dim, dim), dtype=np.int64))


def random_ainf_instance(rng: random.Random, max_arity: int, dim: int = 3) -> AInfInstance:
    """Random tables respecting degrees; they need not satisfy any relation."""
    degrees = tuple(rng.randint(-1, 1) for _ in range(dim))
    d = np.zeros((dim, dim), dtype=np.int64)
    m = GradedModule(degrees, d)
    ops = {}
    for k in range(2, max_arity + 1):
        arr = np.zeros((dim,) * (k + 1), dtype=np.int64)
        for idx in product(range(dim), repeat=k + 1):
            if degrees[idx[-1]] == 2 - k + sum(degrees[i] for i in idx[:-1]):
                arr[idx] = rng.randint(-2, 2)
        ops[k] = arr
    return AInfInstance(m, ops, max_arity)


# mutation smoke test ---------------------------------------------------------

def _suites(degrees, d, mult, max_arity):
    try:
        mod = GradedModule(degrees, d)
    except ValueError:
        return False
    alg = AlgebraInstance(mod, {k: v.copy() for k, v in mult["ombas"].items()}, max_arity)
    ai = AInfInstance(mod, {k: v.copy() for k, v in mult["ainf"].items()}, max_arity)
    return bool(check_twisted_ombas_algebra(alg, max_arity)) and bool(check_ainf_algebra(ai, "B", max_arity))


def mutation_smoke_test(n_mutations: int = 20, seed: int = 0, max_arity: int = 3) -> Verdict:
    """Flip the sign of one nonzero entry of a table or of the differential; some suite must fail."""
    rng = random.Random(seed)
    module, mult = matrix_algebra_module()
    base = {
        "ombas": associative_instance(module, mult, max_arity).ops,
        "ainf": dga_ainf_instance(module, mult, max_arity).ops,
    }
    if not _suites(module.degrees, module.d, base, max_arity):
        return Verdict(False, "mutation smoke test", detail="unmutated instance fails")
    targets = [("d", None)] + [("ombas", k) for k in base["ombas"]] + [("ainf", k) for k in base["ainf"]]
    missed = []
    for _ in range(n_mutations):
        kind, key = rng.choice(targets)
        arr = module.d if kind == "d" else base[kind][key]
        nz = [tuple(int(v) for v in ix) for ix in np.argwhere(arr)]
        pos = rng.choice(nz)
        tables = {k: {kk: vv.copy() for kk, vv in base[k].items()} for k in base}
        d = module.d.copy()
        if kind == "d":
            d[pos] = -d[pos]
        else:
            tables[kind][key][pos] = -tables[kind][key][pos]
        if _suites(module.degrees, d, tables, max_arity):
            missed.append((kind, str(key), pos))
    if missed:
        return Verdict(False, "mutation smoke test", witness=missed[0], detail=f"{len(missed)} undetected")
    return Verdict(True, "mutation smoke test", detail=f"{n_mutations} mutations detected", checked=n_mutations)


# JSON instance files ---------------------------------------------------------

def _table_to_entries(arr: np.ndarray) -> list:
    return [[int(i) for i in ix] + [int(arr[tuple(ix)])] for ix in np.argwhere(arr)]


def _entries_to_table(entries, shape) -> np.ndarray:
    arr = np.zeros(shape, dtype=np.int64)
    for e in entries:
        arr[tuple(e[:-1])] = e[-1]
    return arr


def instance_to_dict(inst) -> dict:
    if isinstance(inst, MorphismInstance):
        return {
            "kind": "morphism",
            "max_arity": inst.max_arity,
            "source": instance_to_dict(inst.source),
            "target": instance_to_dict(inst.target),
            "operations": [{"tree": tree_to_dict(k), "entries": _table_to_entries(v)} for k, v in inst.ops.items()],
        }
    base = {"max_arity": inst.max_arity, "twist": inst.twist, **inst.module.to_dict()}
    if isinstance(inst, AInfInstance):
        return {"kind": "ainf", **base, "operations": [{"arity": k, "entries": _table_to_entries(v)} for k, v in inst.ops.items()]}
    return {"kind": "algebra", **base, "operations": [{"tree": tree_to_dict(k), "entries": _table_to_entries(v)} for k, v in inst.ops.items()]}


def instance_from_dict(d: dict):
    kind = d.get("kind")
    if kind == "morphism":
        src, dst = instance_from_dict(d["source"]), instance_from_dict(d["target"])
        ops = {}
        for op in d["operations"]:
            tg = tree_from_dict(op["tree"])
            ops[tg] = _entries_to_table(op["entries"], (src.module.dim,) * tg.arity + (dst.module.dim,))
        return MorphismInstance(src, dst, ops, d["max_arity"])
    if kind not in ("ainf", "algebra"):
        raise ValueError(f"unknown instance kind {kind!r}")
    module = GradedModule.from_dict(d)
    if kind == "ainf":
        ops = {op["arity"]: _entries_to_table(op["entries"], (module.dim,) * (op["arity"] + 1)) for op in d["operations"]}
        return AInfInstance(module, ops, d["max_arity"], d.get("twist"))
    ops = {}
    for op in d["operations"]:
        t = tree_from_dict(op["tree"])
        ops[t] = _entries_to_table(op["entries"], (module.dim,) * (t.arity + 1))
    return AlgebraInstance(module, ops, d["max_arity"], d.get("twist"))


def load_instance(path: str):
    with open(path) as fh:
        return instance_from_dict(json.load(fh))


def save_instance(inst, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(instance_to_dict(inst), fh, indent=1)
