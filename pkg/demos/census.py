"""
Small triangulations
====================

Enumerate every good gluing of at most two tetrahedra and look at the
counts attached to each one.
"""

from collections import Counter

from hyptrunc import census

tris = census.enumerate_gluings(2, ideal_budget=2)
print(len(tris), "isomorphism classes")

# group the classes by their counts and compact edge valences
shapes = Counter(
    (tuple(tri.counts.values()), tuple(sorted(e.valence for e in tri.edge_classes if e.compact)))
    for tri in tris
)
for (counts, valences), n in sorted(shapes.items()):
    print(n, "x  (t, c, p, l, h, k) =", counts, " valences", valences)

# none of the two-tetrahedron gluings has a cusp
print("cusped:", sum(tri.k > 0 for tri in tris))
