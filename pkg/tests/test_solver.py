import math

import numpy as np
import pytest

from hyptrunc.equations import build, jacobian, jacobian_FA
from hyptrunc.geometry import check_tet
from hyptrunc.solver import (
    SolveError,
    continue_deformed,
    newton,
    solve_complete,
    solve_cone,
    solve_deformed,
    tangent_basis,
    u_differential,
)

SIXTH = math.pi / 6


def test_km_complete(km):
    report = solve_complete(km)
    assert report.converged and report.iterations <= 10
    assert np.abs(report.angles - SIXTH).max() <= 1e-10
    assert report.residual <= 1e-11
    assert report.sv_G.min() > 1e-6
    assert report.mode == "complete"


def test_km_from_perturbed_start(km):
    _, system = build(km)
    rng = np.random.default_rng(5)
    start = np.full((2, 6), SIXTH) + 0.02 * rng.standard_normal((2, 6))
    report = solve_complete(system, start)
    assert report.converged
    assert np.abs(report.angles - SIXTH).max() <= 1e-9


def test_start_at_solution(km, cusped_solution, cusped_system):
    chart, system = build(km)
    x = chart.coords(np.full((2, 6), SIXTH))
    report = solve_complete(system, x)
    assert report.iterations <= 1 and np.abs(report.x - x).max() <= 1e-12
    again = solve_complete(cusped_system, cusped_solution.x)
    assert again.iterations <= 1 and np.abs(again.x - cusped_solution.x).max() <= 1e-12


def test_cusped_complete(cusped, cusped_solution):
    report = cusped_solution
    assert report.converged
    for i in range(cusped.t):
        check_tet(report.angles[i], cusped.ideal_vertices[i])
    assert np.abs(report.u).max() < 1e-10 and np.abs(report.v).max() < 1e-10
    # symmetric solution: pi/3 at the ideal vertices, one value on the compact tetrahedron
    theta = report.angles
    assert np.ptp(theta[0]) < 1e-10
    for i in (1, 2):
        v = cusped.ideal_vertices[i]
        at_v = [k for k in range(6) if v in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)][k]]
        assert np.allclose(theta[i, at_v], math.pi / 3, atol=1e-10)
        others = np.delete(theta[i], at_v)
        assert np.allclose(others + theta[0, 0], math.pi / 3, atol=1e-10)


def test_cusped_symmetric_value(cusped_solution):
    # beta solves cos(a) / (2 cos(a) - 1) = (2 cos^2 b + 1) / (4 cos^2 b - 1) with a = pi/3 - b
    b = cusped_solution.angles[1, 0]
    a = math.pi / 3 - b
    lhs = math.cos(a) / (2 * math.cos(a) - 1)
    rhs = (2 * math.cos(b) ** 2 + 1) / (4 * math.cos(b) ** 2 - 1)
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_tangent_dimensions(km, cusped_basis):
    x = solve_complete(km).x
    assert tangent_basis(km, x).dimension == 0
    assert cusped_basis.dimension == 2
    assert cusped_basis.gap_ratio > 1e3
    B = cusped_basis.vectors
    assert np.allclose(B.T @ B, np.eye(2), atol=1e-12)


def test_tangent_vectors_are_null(cusped_system, cusped_solution, cusped_basis):
    J = jacobian_FA(cusped_system, cusped_solution.x)
    assert np.abs(J @ cusped_basis.vectors).max() < 1e-7


def test_padding_invariance(km):
    _, system = build(km)
    x = solve_complete(system).x
    J = jacobian_FA(system, x)
    padded = np.vstack([J, np.zeros((2, J.shape[1]))])
    s_plain = np.linalg.svd(J, compute_uv=False)
    s_pad = np.linalg.svd(padded, compute_uv=False)
    tol = 1e-8 * s_plain[0]
    assert np.sum(s_plain > tol) == np.sum(s_pad > tol)


def test_ambiguous_gap_warns(cusped_system, cusped_solution):
    with pytest.warns(UserWarning, match="ambiguous spectral gap"):
        tangent_basis(cusped_system, cusped_solution.x, rank_tol=0.5)


def test_dF_has_full_rank(cusped_system, cusped_solution, km):
    JF = jacobian(lambda y: cusped_system.F(cusped_system.angles(y)), cusped_solution.x)
    s = np.linalg.svd(JF, compute_uv=False)
    assert s.min() > 1e-8 * s.max() and len(s) == cusped_system.n_F
    _, system = build(km)
    x = solve_complete(system).x
    s = np.linalg.svd(jacobian(lambda y: system.F(system.angles(y)), x), compute_uv=False)
    assert s.min() > 1e-8 * s.max()


def test_u_chart_differential(cusped_system, cusped_solution, cusped_basis):
    D = u_differential(cusped_system, cusped_solution.x, cusped_basis)
    assert D.shape == (2, 2)
    assert np.linalg.cond(D) < 1e6


def test_deformed_zero_target(cusped_system, cusped_solution):
    report = solve_deformed(cusped_system, [0j], cusped_solution.x)
    assert np.abs(report.x - cusped_solution.x).max() < 1e-12


def test_deformed_chart_derivative(cusped_system, cusped_solution):
    u0, delta = 0.02 + 0.01j, 1e-5
    base = solve_deformed(cusped_system, [u0], cusped_solution.x)
    for d in (delta, 1j * delta):
        moved = solve_deformed(cusped_system, [u0 + d], base.x)
        du = (moved.u[0] - base.u[0]) / d
        assert abs(du - 1) < 1e-5


def test_deformed_hits_target(cusped_system, cusped_solution):
    report = solve_deformed(cusped_system, [0.03 - 0.02j], cusped_solution.x)
    assert abs(report.u[0] - (0.03 - 0.02j)) < 1e-10


def test_continuation_to_larger_u(cusped_system, cusped_solution):
    report = continue_deformed(cusped_system, [0.5j], cusped_solution.x)
    assert abs(report.u[0] - 0.5j) < 1e-10


def test_branch_failure_names_cusp(cusped_system, cusped_solution):
    with pytest.raises(SolveError, match="cusp 0"):
        continue_deformed(cusped_system, [1.8j], cusped_solution.x)


def test_cone_two_pi_is_complete(km):
    report = solve_cone(km, [2 * math.pi])
    assert np.abs(report.angles - SIXTH).max() <= 1e-10


@pytest.mark.parametrize("shift", [-0.05, 0.05])
def test_cone_symmetric(km, shift):
    report = solve_cone(km, [2 * math.pi + shift])
    theta = report.angles
    assert np.ptp(theta) < 1e-9
    assert theta.mean() == pytest.approx((2 * math.pi + shift) / 12, abs=1e-12)
    assert (theta.mean() > SIXTH) == (shift > 0)


def test_cone_needs_compact(cusped):
    with pytest.raises(ValueError):
        solve_cone(cusped, [2 * math.pi])


def test_determinism(cusped_system):
    a = solve_complete(cusped_system)
    b = solve_complete(cusped_system)
    assert a.x.tobytes() == b.x.tobytes()
    assert a.sv_G.tobytes() == b.sv_G.tobytes()
    assert a.history == b.history


def test_newton_stalled_line_search():
    # a constant nonzero map admits no decreasing step
    x, res, its, hist, ok, msg = newton(lambda y: np.array([1.0 + 0 * y[0]]), np.array([0.3]))
    assert not ok and "no in-domain decreasing step" in msg and res == 1.0


def test_non_convergence_reports_best(km):
    _, system = build(km)
    with pytest.raises(SolveError) as err:
        solve_complete(system, max_iter=1, init=np.full((2, 6), 0.45))
    report = err.value.report
    assert not report.converged and report.seed is not None
    assert np.isfinite(report.residual)
