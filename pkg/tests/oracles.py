"""Reference computations that share no code with the package.

Trees here are nested Python lists: ``None`` is a leaf, a list of children
is an internal vertex.  Broken edges are not represented.
"""

from itertools import combinations, product


def catalan(n):
    c = 1
    for k in range(n):
        c = c * 2 * (2 * k + 1) // (k + 2)
    return c


def little_schroeder(n):
    """Planar trees with ``n`` leaves and every vertex of valence >= 3."""
    s = {1: 1, 2: 1}
    for k in range(3, n + 1):
        s[k] = (3 * (2 * k - 3) * s[k - 1] - (k - 3) * s[k - 2]) // k
    return s[n]


def compositions(n, min_parts):
    if n == 0:
        if min_parts <= 0:
            yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first, min_parts - 1):
            yield (first,) + rest


def nested_stable(n):
    if n == 1:
        return [None]
    out = []
    for parts in compositions(n, 2):
        for kids in product(*(nested_stable(k) for k in parts)):
            out.append(list(kids))
    return out


def nested_binary(n):
    if n == 1:
        return [None]
    return [[a, b] for k in range(1, n) for a in nested_binary(k) for b in nested_binary(n - k)]


def leaves(x):
    return 1 if x is None else sum(leaves(c) for c in x)


def brute_gauged_count(n):
    """Labelings B < O < A of internal vertices, weakly increasing rootward-to-leafward,
    with at most one ON vertex on each root-to-leaf path."""
    total = 1 if n == 1 else 0
    if n == 1:
        return total
    for t in nested_stable(n):
        verts, paths = [], []

        def walk(x, path):
            if x is None:
                paths.append(path)
                return
            i = len(verts)
            verts.append(x)
            for c in x:
                walk(c, path + [i])

        walk(t, [])
        for labels in product("BOA", repeat=len(verts)):
            ok = True
            for p in paths:
                seq = [labels[i] for i in p]
                if seq.count("O") > 1 or any("BOA".index(a) > "BOA".index(b) for a, b in zip(seq, seq[1:])):
                    ok = False
                    break
            total += ok
    return total


def loday_vertex(t, weights):
    """Coordinate ``i``: (left weight) * (right weight) at the vertex separating leaves i, i+1."""
    coords = []
    pos = [0]

    def go(x):
        if x is None:
            w = weights[pos[0]]
            pos[0] += 1
            return w
        a, b = x
        left = go(a)
        coords.append(None)
        slot = len(coords) - 1
        right = go(b)
        coords[slot] = left * right
        return left + right

    go(t)
    return tuple(coords)


def word_of(x):
    letters = iter("abcdefghijklmnopqrstuvwxyz")

    def go(y):
        if y is None:
            return next(letters)
        return "(" + "".join(go(c) for c in y) + ")"

    s = go(x)
    return s[1:-1] if x is not None else s


def permutation_sign(seq):
    inv = sum(1 for i, j in combinations(range(len(seq)), 2) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


def graft_sign(outer, slot, inner):
    """Sign of grafting ``inner`` at leaf ``slot`` of ``outer``: concatenated edges vs preorder.

    Edges are labeled by their upper vertex; outer edges first, then inner
    edges, then the new edge joining them is not counted (it is broken).
    """
    labels = iter(range(10**6))
    outer_l = _label(outer, labels)
    inner_l = _label(inner, labels)
    leaf = [0]

    def plug(x):
        if x is None:
            k = leaf[0]
            leaf[0] += 1
            return ("INNER", inner_l) if k == slot else None
        return (x[0], [plug(c) for c in x[1]])

    glued = plug(outer_l)
    order = []

    def pre(x, is_root):
        if x is None:
            return
        if x[0] == "INNER":
            root = x[1]
            for c in root[1]:
                pre(c, False)
            return
        if not is_root:
            order.append(x[0])
        for c in x[1]:
            pre(c, False)

    pre(glued, True)
    outer_root, inner_root = outer_l[0], inner_l[0]
    concat = [e for e in _edges(outer_l) if e != outer_root] + [e for e in _edges(inner_l) if e != inner_root]
    rank = {e: i for i, e in enumerate(concat)}
    return permutation_sign([rank[e] for e in order])


def _label(x, counter):
    if x is None:
        return None
    return (next(counter), [_label(c, counter) for c in x])


def _edges(x):
    if x is None:
        return []
    out = [x[0]]
    for c in x[1]:
        out += _edges(c)
    return out


def lp_feasible(rows, n):
    """Strict/weak/equality feasibility by maximizing a bounded slack with scipy."""
    import numpy as np
    from scipy.optimize import linprog

    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for coeffs, const, rel in rows:
        c = [float(v) for v in coeffs]
        if rel == "=":
            a_eq.append(c + [0.0])
            b_eq.append(-float(const))
        else:
            # -(c.x + const) + s*[strict] <= 0
            a_ub.append([-v for v in c] + [1.0 if rel == ">" else 0.0])
            b_ub.append(float(const))
    res = linprog(
        c=[0.0] * n + [-1.0],
        A_ub=np.array(a_ub) if a_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=np.array(a_eq) if a_eq else None,
        b_eq=np.array(b_eq) if b_eq else None,
        bounds=[(-50, 50)] * n + [(0, 1)],
        method="highs",
    )
    return res.status == 0 and -res.fun > 1e-9
