"""
Trees and their differentials
=============================

Stable trees index the operations; collapsing and breaking an inner edge
gives the differential.
"""

from homotopy_trees import ombas
from homotopy_trees.chains import d_squared_is_zero
from homotopy_trees.trees import enumerate_gauged_trees, enumerate_stable_trees, parse_gauged, parse_word, to_text

# how many trees of each arity
for n in range(2, 7):
    print(n, len(enumerate_stable_trees(n)))

# one inner edge: collapse it (to the corolla) or break it
t = parse_word("(ab)c")
print(t.word(), "->", ombas.diff_ombas(t))

# the pentagon's worth of trees at arity four
for t in enumerate_stable_trees(4):
    print(f"{t.word():10s} degree {ombas.degree(t)}")

# the differential squares to zero on every generator
print(d_squared_is_zero(ombas.diff_ombas, [t for n in range(2, 6) for t in enumerate_stable_trees(n)]).line())

# gauged trees: each vertex sits below (B), on (O) or above (A) the gauge
for g in enumerate_gauged_trees(3)[:5]:
    print(to_text(g))
for word in ("ab:B", "ab:A"):
    for target, c in ombas.diff_gauged(parse_gauged(word)).sorted_items():
        print(word, "->", c, to_text(target))

# two gauge crossings on a single level collapse together
for kind, target, sign, _ in ombas.boundary_terms(parse_gauged("(ab)(cd):BOO")):
    print(kind, to_text(target), sign)
