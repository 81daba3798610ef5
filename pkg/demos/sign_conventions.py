"""
Two sign conventions for A-infinity relations
=============================================

Both are in use.  Rescaling m_n by (-1)^(n choose 2) turns one into the other.
"""

from homotopy_trees import ainf, ombas

for conv in ("A", "B"):
    print(conv, ainf.format_chain(ainf.ainf_diff(4, conv)))

print([ainf.twist_sign(n) for n in range(1, 7)])

# the twist converts the relations for algebras and for morphisms
for n in range(2, 6):
    print(n, bool(ainf.convert_convention(n)), bool(ainf.convert_convention(n, morphism=True)))

# the tree differential sides with B: phi commutes with the differentials
print(ainf.check_chain_map_phi(5).line())
print(ainf.check_chain_map_psi(4).line())

# and not with A
lhs = ombas.diff_ombas_chain(ombas.phi_generator(3))
rhs = ainf.phi_chain(ainf.ainf_diff(3, "A"))
print(lhs == rhs)

# morphism relations, and composition of morphisms
print(ainf.format_chain(ainf.ainf_morph_diff(3)))
print(ainf.format_chain(ainf.compose_ainf_morphisms(2)))
