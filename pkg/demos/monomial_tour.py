"""
Monomial crystals in type A2
============================

Explore a few components, look at the graph, and check them against
the Weyl dimension and the weight multiplicities.
"""

from kcrystals import graph
from kcrystals.cartan import freudenthal_multiplicities, parse_cartan, weyl_dim
from kcrystals.graph import explore, weight_multiset
from kcrystals.monomial import ORIGINAL, CMatrix, MonomialCrystal, MonomialRule, parse_monomial
from kcrystals.verify import all_checks

A2 = parse_cartan("A2")
print(A2, A2.gcm)

# The original rule, starting from Y1(0): a three-element path
G = explore(MonomialCrystal(A2, ORIGINAL), [parse_monomial("Y1(0)")])
for a, i, b in G.edges():
    print(f"  {G.nodes[a].label}  --{i}-->  {G.nodes[b].label}")

# The variant rule depends on an integer matrix c with c12 + c21 = 1
c = CMatrix.parse("1,2:0;2,1:1", A2)
adjoint = explore(MonomialCrystal(A2, MonomialRule.variant(c)), [parse_monomial("Y1(0) Y2(0)")])
print("adjoint component:", len(adjoint), "elements, Weyl dimension", weyl_dim(A2, (1, 1)))
print("multiplicities agree:", weight_multiset(adjoint) == freudenthal_multiplicities(A2, (1, 1)))

for rep in all_checks(adjoint, A2):
    print(f"  {rep.check_name}: {rep.verdict}")

# DOT output, ready for graphviz
print(graph.to_dot(adjoint)[:200], "...")
