"""
Rigidity of the compact part
============================

Along both deformation directions of the cusped fixture, the lengths and
angles of the compact pieces do not move to first order.  Halving the step
shows how fast they do move.
"""

from collections import Counter

from hyptrunc.analysis import rigidity_check
from hyptrunc.data import load

result = rigidity_check(load("one_cusp"), h=1e-2)
print(result.note)
print("largest first derivative: %.2e" % result.max_derivative)

# |g(h) - g(0)| / |g(h/2) - g(0)|: 4 for quadratic change, 16 for quartic
print(Counter(round(e.ratio, 2) for e in result.entries))
for e in result.of_kind("edge_length"):
    print(e.label, "direction", e.direction, "value %.10f order %.3f" % (e.value, e.order))
