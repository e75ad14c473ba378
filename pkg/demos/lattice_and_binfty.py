"""
B(infinity) inside B(infinity) x B_L
====================================

Build a truncated model of B(infinity), compare its size with Kostant
partition counts, then embed it next to a lattice crystal.
"""

import numpy as np

from kcrystals.cartan import parse_cartan
from kcrystals.lattice import (LatticeFunctionals, binfty_truncated, bl_factorization_check, check_ell_condition,
                               cyclic_functionals, kostant_counts, verify_lattice_embedding)

A2 = parse_cartan("A2")
for d in range(5):
    G = binfty_truncated(A2, depth=d)
    print(f"depth {d}: {len(G)} elements, Kostant total {sum(kostant_counts(A2, d).values())}")

# functionals as a matrix: row i holds L_i(alpha_j)
L = LatticeFunctionals([[-1, 0], [1, -1]])
print(np.array(L.L))
print("condition:", check_ell_condition(L, A2)[0], " factorization:", bl_factorization_check(A2, L))
print(verify_lattice_embedding(A2, L, 3).to_json()["checks"])

# the cyclic choice on affine A2
A2hat = parse_cartan("A2~")
rep = verify_lattice_embedding(A2hat, cyclic_functionals(A2hat), 3)
print("affine A2, cyclic:", rep.passed, rep.nodes, "elements")

# a choice that fails
bad = LatticeFunctionals([[-1, 0], [0, -1]])
rep = verify_lattice_embedding(A2, bad, 3)
print("L = -I:", rep.checks)
