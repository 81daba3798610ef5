"""
Checking relations on a concrete algebra
========================================

Cochains on an interval: two vertices e11, e22 in degree 0 and an edge e12
in degree 1.  Every relation is evaluated as integer tables.
"""

import numpy as np

from homotopy_trees import evaluator as ev
from homotopy_trees.chains import Chain
from homotopy_trees.trees import corolla

module, mult = ev.matrix_algebra_module()
print(module.degrees)
print(module.d)

alg = ev.associative_instance(module, mult, 5)
print(ev.evaluate(Chain.basis(corolla(2), 0), alg, (0, 2)))  # e11 * e12 = e12

print(ev.check_twisted_ombas_algebra(alg, 5).line())
print(ev.check_ainf_algebra(ev.dga_ainf_instance(module, mult, 5), "B", 5).line())

# the identity is a strict morphism; with the wrong sign it is not
print(ev.check_twisted_ombas_morphism(ev.algebra_map_instance(alg, alg, np.eye(3), 4), 4).line())
print(ev.check_twisted_ombas_morphism(ev.algebra_map_instance(alg, alg, np.eye(3), 4, sign=-1), 4).line())

# a binary product alone does not make an algebra over the trees
only_m2 = ev.AlgebraInstance(module, {corolla(2): alg.table(corolla(2))}, 3)
print(ev.check_twisted_ombas_algebra(only_m2, 3).line())

# flipping any single sign gets caught
print(ev.mutation_smoke_test(20).line())
