"""
Facet signs of associahedra and multiplihedra
=============================================

Exact rational realizations.  The sign each facet picks up in the cellular
boundary is read off the geometry and compared with the algebraic relation.
"""

from homotopy_trees import ainf, polytopes as P

# the pentagon, unit weights
k4 = P.build("assoc", P.unit_weights(4))
print([P.format_vertex(v) for v in P.vertices(k4)])

# each facet: its label, the determinant sign and the closed form
for label in P.facets(k4):
    print(label, P.facet_sign(k4, label), P.closed_form("assoc", label))

# the signed facets, read as composites, are the relation for m4
print(ainf.format_chain(P.cellular_boundary(k4)))
print(ainf.format_chain(ainf.ainf_diff(4, "B")))

# same for the hexagon J3 and the relation for f3
j3 = P.build("multipl", P.unit_weights(3))
print(len(P.vertices(j3)), "vertices")
print(ainf.format_chain(P.cellular_boundary(j3)))

# weights move vertices but not signs
k4w = P.build("assoc", (1, 3, 2, 1))
print([P.facet_sign(k4w, l) for l in P.facets(k4w)] == [P.facet_sign(k4, l) for l in P.facets(k4)])

# a full sweep
for n in range(3, 6):
    print(P.check_signs("assoc", n).line())
for n in range(2, 5):
    print(P.check_signs("multipl", n).line())
