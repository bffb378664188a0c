"""
A compact manifold with geodesic boundary
=========================================

The bundled two-tetrahedron triangulation has one edge of valence 12 and a
genus-two boundary.  Its hyperbolic structure has every dihedral angle
equal to pi/6.
"""

import math

import numpy as np

from hyptrunc.data import load
from hyptrunc.equations import build
from hyptrunc.solver import solve_complete

tri = load("kojima_miyamoto")
chart, system = build(tri)
print(tri)
print("free coordinates:", chart.dim, " equations:", system.n_equations)

# start away from the solution so Newton has something to do
rng = np.random.default_rng(1)
start = np.full((2, 6), math.pi / 6) + 0.02 * rng.standard_normal((2, 6))
report = solve_complete(system, init=start)
print("iterations:", report.iterations, " residual history:", np.array(report.history))
print("max |angle - pi/6|:", np.abs(report.angles - math.pi / 6).max())

# the single internal edge
lengths = system.lengths(report.angles)
print("internal edge length:", next(iter(lengths.values())))

# a nonsingular Jacobian of the full system means the point is isolated
print("smallest singular value of dG:", report.sv_G.min())
