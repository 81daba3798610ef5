"""
Where the gauge sits
====================

A metric tree with a gauge at height -lam lands in exactly one cell.  Cells
are exact rational cones; their faces match the bimodule differential.
"""

from fractions import Fraction

from homotopy_trees import cones
from homotopy_trees.trees import parse_gauged, parse_word, to_text

t = parse_word("(ab)c")
for lam in (Fraction(1), Fraction(-1, 2), Fraction(-1), Fraction(-3)):
    cell, wall = cones.classify_point(t, lam, [1])
    print(lam, to_text(cell), "wall" if wall else "")

g = parse_gauged("(ab)c:BA")
c = cones.cone_system(g)
print(cones.cone_dimension(g), [str(x) for x in c.interior_point()])

# faces of the compactified cell, with signs
for s in cones.boundary_strata(g):
    print(s.kind, to_text(s.target), s.sign)

print(cones.check_dimensions(4).line())
print(cones.check_strata(4).line())
print(cones.check_partition(3, samples=200).line())
