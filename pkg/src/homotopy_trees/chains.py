"""Integer chains on tree bases, differentials and integral homology."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from . import trees


class DegreeError(ValueError):
    pass


class Chain:
    """A finite integer combination of basis keys, homogeneous in degree.

    Zero coefficients are never stored.  ``degree`` may be ``None`` for the
    zero chain or when the caller does not track gradings.
    """

    __slots__ = ("terms", "degree")

    def __init__(self, terms: Mapping[Hashable, int] | None = None, degree: int | None = None):
        self.terms = {k: int(c) for k, c in (terms or {}).items() if c}
        self.degree = degree

    @classmethod
    def basis(cls, key, degree: int | None = None, coeff: int = 1) -> "Chain":
        return cls({key: coeff}, degree)

    @classmethod
    def from_items(cls, items: Iterable[tuple[Hashable, int]], degree: int | None = None) -> "Chain":
        acc: dict = {}
        for k, c in items:
            acc[k] = acc.get(k, 0) + c
        return cls(acc, degree)

    @classmethod
    def from_terms(cls, items: Iterable[tuple[Hashable, int]], degree_of: Callable[[Any], int]) -> "Chain":
        """Build a chain and check that every key has the same degree."""
        acc: dict = {}
        deg = None
        for k, c in items:
            d = degree_of(k)
            if deg is None:
                deg = d
            elif d != deg:
                raise DegreeError(f"heterogeneous chain: degrees {deg} and {d}")
            acc[k] = acc.get(k, 0) + c
        return cls(acc, deg)

    def _merge_degree(self, other: "Chain") -> int | None:
        if self.terms and other.terms and None not in (self.degree, other.degree) and self.degree != other.degree:
            raise DegreeError(f"cannot add chains of degree {self.degree} and {other.degree}")
        return self.degree if self.degree is not None else other.degree

    def __add__(self, other: "Chain") -> "Chain":
        deg = self._merge_degree(other)
        acc = dict(self.terms)
        for k, c in other.terms.items():
            acc[k] = acc.get(k, 0) + c
        return Chain(acc, deg)

    def __neg__(self) -> "Chain":
        return Chain({k: -c for k, c in self.terms.items()}, self.degree)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __mul__(self, s: int) -> "Chain":
        return Chain({k: s * c for k, c in self.terms.items()}, self.degree)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Chain) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __getitem__(self, key) -> int:
        return self.terms.get(key, 0)

    def items(self):
        return self.terms.items()

    def keys(self):
        return self.terms.keys()

    def support(self) -> set:
        return set(self.terms)

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kc: _sort_key(kc[0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.sorted_items():
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append(f"{sign} {mag}{k!r}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else s


def add(a: Chain, b: Chain) -> Chain:
    return a + b


def _sort_key(k):
    sk = getattr(k, "sort_key", None)
    return (0, sk()) if sk is not None else (1, repr(k))


def linear(f: Callable[[Any], Chain], x: Chain) -> Chain:
    """Extend a basis map linearly."""
    out = Chain()
    for k, c in x.items():
        out = out + f(k) * c
    return out


@dataclass
class Verdict:
    """Outcome of a verification; truthy iff it passed."""

    ok: bool
    name: str = ""
    witness: Any = None
    detail: str = ""
    checked: int = 0

    def __bool__(self):
        return self.ok

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        wit = "" if self.ok or self.witness is None else f" witness: {self.witness!r}"
        return f"{status} {self.name}{extra}{wit}"


def d_squared_is_zero(d: Callable[[Any], Chain], basis: Iterable, name: str = "d^2 = 0") -> Verdict:
    n = 0
    for x in basis:
        n += 1
        dd = linear(d, d(x))
        if dd:
            return Verdict(False, name, witness=x, detail=f"residual {dd!r}", checked=n)
    return Verdict(True, name, detail=f"{n} generators", checked=n)


# complexes -------------------------------------------------------------------

class SparseMatrix:
    """Integer matrix stored by rows, used for boundary maps."""

    def __init__(self, n_rows: int, n_cols: int, rows: dict[int, dict[int, int]] | None = None):
        self.n_rows, self.n_cols = n_rows, n_cols
        self.rows = {r: {c: v for c, v in row.items() if v} for r, row in (rows or {}).items()}
        self.rows = {r: row for r, row in self.rows.items() if row}

    @classmethod
    def from_dense(cls, m: Sequence[Sequence[int]]) -> "SparseMatrix":
        n_rows = len(m)
        n_cols = len(m[0]) if n_rows else 0
        return cls(n_rows, n_cols, {r: {c: int(v) for c, v in enumerate(row) if v} for r, row in enumerate(m)})

    def dense(self) -> list[list[int]]:
        out = [[0] * self.n_cols for _ in range(self.n_rows)]
        for r, row in self.rows.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def matmul_is_zero(self, other: "SparseMatrix") -> bool:
        """Whether ``self @ other`` vanishes."""
        for r, row in self.rows.items():
            acc: dict[int, int] = {}
            for k, v in row.items():
                for c, w in other.rows.get(k, {}).items():
                    acc[c] = acc.get(c, 0) + v * w
            if any(acc.values()):
                return False
        return True


@dataclass
class SmithDecomposition:
    """Invariant factors (all nonzero diagonal entries) and shape."""

    invariants: list[int]
    n_rows: int
    n_cols: int

    @property
    def rank(self) -> int:
        return len(self.invariants)

    @property
    def nullity(self) -> int:
        return self.n_cols - self.rank

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.invariants if d > 1]


def _dense_snf(m: list[list[int]]) -> list[int]:
    """Diagonal of the Smith form of a small dense matrix."""
    a = [row[:] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        entries = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // p
                    for j in range(t, cols):
                        a[i][j] -= q * a[t][j]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // p
                    for i in range(t, rows):
                        a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        dirty = True
            if not dirty:
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p), None)
                if bad is None:
                    break
                # fold a non-divisible row into the pivot row
                for j in range(t, cols):
                    a[t][j] += a[bad[0]][j]
                continue
            entries = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
            entries += [(abs(a[t][j]), t, j) for j in range(t, cols) if a[t][j]]
            _, i, j = min(entries)
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def smith_normal_form(m) -> SmithDecomposition:
    """Invariant factors of an integer matrix.

    Unit pivots are eliminated sparsely first (they contribute factor 1 and
    cause no growth); the remainder goes through a dense reduction.
    """
    if not isinstance(m, SparseMatrix):
        m = SparseMatrix.from_dense(m)
    rows = {r: dict(row) for r, row in m.rows.items()}
    cols: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            cols.setdefault(c, set()).add(r)
    units = 0
    while True:
        best = None
        for r, row in rows.items():
            for c, v in row.items():
                if v in (1, -1):
                    cost = (len(row) - 1) * (len(cols[c]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, r, c)
                        if cost == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, r, c = best
        prow = rows.pop(r)
        v = prow[c]
        for c2 in prow:
            cols[c2].discard(r)
        for r2 in list(cols[c]):
            row2 = rows[r2]
            q = row2[c] * v  # v = ±1, so row2[c] / v == row2[c] * v
            for c2, w in prow.items():
                nv = row2.get(c2, 0) - q * w
                if nv:
                    if c2 not in row2:
                        cols[c2].add(r2)
                    row2[c2] = nv
                else:
                    row2.pop(c2, None)
                    cols[c2].discard(r2)
            if not row2:
                del rows[r2]
        del cols[c]
        units += 1
    rest_rows = sorted(rows)
    rest_cols = sorted({c for row in rows.values() for c in row})
    dense = [[rows[r].get(c, 0) for c in rest_cols] for r in rest_rows]
    diag = _dense_snf(dense) if dense else []
    return SmithDecomposition([1] * units + sorted(d for d in diag if d), m.n_rows, m.n_cols)


@dataclass
class GradedComplex:
    """Cochain complex with ``d[k]: C^k -> C^(k+1)`` as sparse matrices."""

    basis: dict[int, list]
    d: dict[int, SparseMatrix] = field(default_factory=dict)

    @classmethod
    def from_differential(cls, basis: Mapping[int, Sequence], diff: Callable[[Any], Chain]) -> "GradedComplex":
        basis = {k: list(v) for k, v in basis.items()}
        index = {k: {b: i for i, b in enumerate(v)} for k, v in basis.items()}
        mats = {}
        for k, cells in basis.items():
            if k + 1 not in basis:
                continue
            tgt = index[k + 1]
            rows: dict[int, dict[int, int]] = {}
            for j, cell in enumerate(cells):
                for key, c in diff(cell).items():
                    if key not in tgt:
                        raise KeyError(f"boundary term {key!r} missing from degree {k + 1} basis")
                    rows.setdefault(tgt[key], {})[j] = c
            mats[k] = SparseMatrix(len(basis[k + 1]), len(cells), rows)
        return cls(basis, mats)

    def is_complex(self) -> bool:
        return all(self.d[k + 1].matmul_is_zero(self.d[k]) for k in self.d if k + 1 in self.d)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (k % 2) * len(v) for k, v in self.basis.items())

    def to_dict(self) -> dict:
        return {
            "basis": {str(k): [_key_dict(b) for b in v] for k, v in sorted(self.basis.items())},
            "d": {str(k): m.dense() for k, m in sorted(self.d.items())},
        }


def homology(c: GradedComplex) -> dict[int, tuple[int, list[int]]]:
    """Per degree: (free rank, torsion invariant factors)."""
    if not c.is_complex():
        raise ValueError("not a complex: consecutive boundary maps do not compose to zero")
    snf = {k: smith_normal_form(m) for k, m in c.d.items()}
    out = {}
    for k, cells in sorted(c.basis.items()):
        out_rank = snf[k].rank if k in snf else 0
        in_snf = snf.get(k - 1)
        in_rank = in_snf.rank if in_snf else 0
        torsion = in_snf.torsion if in_snf else []
        out[k] = (len(cells) - out_rank - in_rank, torsion)
    return out


def is_point_homology(h: Mapping[int, tuple[int, list[int]]], degree: int = 0) -> bool:
    return all((r, t) == ((1, []) if k == degree else (0, [])) for k, (r, t) in h.items())


# serialization ---------------------------------------------------------------

def _key_dict(k):
    to = getattr(k, "to_dict", None)
    return to() if to is not None else trees.tree_to_dict(k)


def chain_to_dict(x: Chain) -> dict:
    return {"degree": x.degree, "terms": [{"key": _key_dict(k), "coeff": c} for k, c in x.sorted_items()]}


def chain_from_dict(d: dict, key_from: Callable[[dict], Any] = trees.tree_from_dict) -> Chain:
    return Chain({key_from(t["key"]): t["coeff"] for t in d["terms"]}, d.get("degree"))


def dumps(x: Chain) -> str:
    return json.dumps(chain_to_dict(x))
