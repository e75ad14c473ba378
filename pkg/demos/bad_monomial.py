"""
Where the original rule breaks
==============================

In A1 the monomial Y(1) Y(2)^-1 has a positive exponent followed by a
negative one.  Lowering and then raising does not come back.
"""

from kcrystals.cartan import parse_cartan
from kcrystals.graph import explore
from kcrystals.monomial import ORIGINAL, MonomialCrystal, good_monomial_violation, parse_monomial
from kcrystals.verify import check_crystal_axioms

A1 = parse_cartan("A1")
B = MonomialCrystal(A1, ORIGINAL)
start = parse_monomial("Y(1) Y(2)^-1", A1)

down = B.f("1", start)
back = B.e("1", down)
print(start, "->", down, "->", back)
print("round trip holds:", back == start)

G = explore(B, [start])
print("sign pattern at:", good_monomial_violation(G))
rep = check_crystal_axioms(G)
print(rep.verdict)
for w in rep.witnesses:
    print("  ", w["axiom"], [str(x) for x in w["elements"]])
