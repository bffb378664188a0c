"""
Dehn filling
============

Move away from the complete structure by prescribing the meridian log u,
read off the generalized filling coefficients, then solve directly for
some integral fillings.
"""

from hyptrunc.analysis import coefficient_box, dehn_coefficients, filling_search
from hyptrunc.data import load
from hyptrunc.equations import build
from hyptrunc.solver import continue_deformed, solve_complete

system = build(load("one_cusp"))[1]
x0 = solve_complete(system, tol=1e-13).x

for u in (0.02j, 0.3j, 0.5 + 0.5j):
    report = continue_deformed(system, [u], x0)
    (p, q), = dehn_coefficients(report.x, system)
    print("u = %-12s  (p, q) = (%.6f, %.6f)" % (u, p, q))

# small coefficients sit far from the complete point; stay outside norm 5
targets = coefficient_box(7, 7, min_norm=5)[:12]
result = filling_search(system, targets, x0)
for coeffs, x in result.solved:
    print("filled", coeffs)
for coeffs, why in result.failures:
    print("failed", coeffs, why)
