"""
Cusp shape
==========

Solve the one-cusped fixture, check that both peripheral holonomies are
trivial, then recover the cusp shape from the ratio v/u along a sequence of
deformations that shrink to the complete point.
"""

import numpy as np

from hyptrunc.analysis import tau_estimate
from hyptrunc.data import load
from hyptrunc.equations import build
from hyptrunc.solver import solve_complete, tangent_basis

tri = load("one_cusp")
system = build(tri)[1]
print(tri)

report = solve_complete(system, tol=1e-13)
print("u, v at the complete point:", report.u, report.v)
print(np.round(report.angles, 6))

# two tangent directions: the deformation space has real dimension 2k
basis = tangent_basis(system, report.x)
print("nullity:", basis.dimension, " gap ratio: %.3g" % basis.gap_ratio)

est = tau_estimate(system, x0=report.x)
for u, r in zip(est.u, est.ratios):
    print("u = %-26s v/u = %.12f%+.12fj" % (u, r.real, r.imag))
print("differences shrink by", est.contraction)
print("tau =", est.tau, "(hexagonal: %s)" % np.exp(1j * np.pi / 3))
