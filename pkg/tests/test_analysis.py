import math

import numpy as np
import pytest

from hyptrunc.analysis import (
    INFINITY,
    coefficient_box,
    coefficients_from_uv,
    dehn_coefficients,
    fill,
    filling_search,
    rigidity_check,
    tau_estimate,
)
from hyptrunc.solver import solve_complete, solve_deformed
from hyptrunc.triangulation import Triangulation


@pytest.fixture(scope="module")
def tau(cusped_system, cusped_solution):
    return tau_estimate(cusped_system, 0, cusped_solution.x)


@pytest.fixture(scope="module")
def rigidity(cusped_system, cusped_solution, cusped_basis):
    return rigidity_check(cusped_system, cusped_solution.x, cusped_basis)


def test_complete_point_is_infinity(cusped, cusped_solution):
    coeffs = dehn_coefficients(cusped_solution.x, cusped)
    assert coeffs.values == (INFINITY,)
    assert coeffs.is_integral_coprime


def test_direct_solve():
    (pq,) = coefficients_from_uv([2j * math.pi], [1.0 + 0j])
    assert pq == pytest.approx((1.0, 0.0), abs=1e-15)


def test_defining_equation_residual(rng):
    for _ in range(50):
        eps = 10 ** rng.uniform(-6, -1)
        tau = complex(rng.normal(), rng.uniform(0.2, 2))
        u, v = eps * 1j, tau * eps * 1j
        p, q = coefficients_from_uv([u], [v])[0]
        assert abs(p * u + q * v - 2j * math.pi) <= 1e-12 * max(1.0, abs(p * u))


def test_real_proportional_rejected():
    with pytest.raises(ValueError, match="real-proportional"):
        coefficients_from_uv([0.1 + 0.1j], [0.2 + 0.2j])


def test_coefficients_on_deformed_points(cusped_system, cusped_solution):
    for u in (0.05j, 0.03 + 0.02j, -0.01j):
        x = solve_deformed(cusped_system, [u], cusped_solution.x).x
        (p, q), = dehn_coefficients(x, cusped_system)
        report_u = solve_deformed(cusped_system, [u], x)
        residual = p * report_u.u[0] + q * report_u.v[0] - 2j * math.pi
        assert abs(residual) <= 1e-9


def test_tau_sequence(tau):
    assert tau.cauchy
    assert np.all(tau.contraction >= 1.8)
    assert abs(tau.tau.imag) > 1e-3
    assert np.allclose(tau.u, 1j * 2.0 ** -np.arange(3, 9), atol=1e-10)


def test_tau_is_a_hexagonal_shape(cusped_solution, tau):
    # at the complete point every cusp triangle is equilateral (ideal angles
    # pi/3) and mu, lambda are single link edges meeting once, so the shape
    # ratio of the cusp torus is a primitive sixth or third root of unity
    assert np.allclose(cusped_solution.angles[1:].max(), math.pi / 3)
    candidates = [np.exp(1j * math.pi / 3), np.exp(2j * math.pi / 3)]
    assert min(abs(tau.tau - c) for c in candidates) < 1e-8


def test_tau_basis_change(cusped, cusped_solution, tau):
    link = cusped.cusps[0]
    inverse_mu = tuple(link.reverse(s) for s in reversed(link.meridian))
    swapped = Triangulation(cusped.tets, curves={0: (link.longitude, inverse_mu)})
    other = tau_estimate(swapped, 0, solve_complete(swapped).x)
    assert other.tau == pytest.approx(-1 / tau.tau, abs=1e-6)


def test_coefficients_grow_along_sequence(cusped_system, cusped_solution, tau):
    # (p, q) tends to infinity as u tends to 0 along the tau sequence
    sizes = []
    x = cusped_solution.x
    for u in tau.u:
        x = solve_deformed(cusped_system, [u], x).x
        p, q = dehn_coefficients(x, cusped_system)[0]
        sizes.append(math.hypot(p, q))
    assert all(b > 1.8 * a for a, b in zip(sizes, sizes[1:]))


def test_fill_infinity(cusped_system, cusped_solution):
    report = fill(cusped_system, INFINITY, cusped_solution.x)
    assert np.abs(report.x - cusped_solution.x).max() < 1e-12


def test_filling_round_trip(cusped_system, cusped_solution):
    targets = [(7, 1), (1, 7), (6, 5), (7, -3), (4, -7)]
    result = filling_search(cusped_system, targets, cusped_solution.x)
    assert not result.failures and not result.rejected
    assert [c for c, _ in result.solved] == [(t,) for t in targets]
    for (coeffs,), x in result.solved:
        got = dehn_coefficients(x, cusped_system)
        assert got[0] == pytest.approx(coeffs, abs=1e-6)
        assert got.is_integral_coprime


def test_non_coprime_rejected_before_solving(cusped_system, cusped_solution):
    result = filling_search(cusped_system, [(5, 2), (10, 4)], cusped_solution.x)
    assert [c for c, _ in result.rejected] == [((10, 4),)]
    assert [c for c, _ in result.solved] == [((5, 2),)]


def test_failures_do_not_abort(cusped_system, cusped_solution):
    result = filling_search(cusped_system, [(1, 0), (7, 1)], cusped_solution.x)
    assert [c for c, _ in result.failures] == [((1, 0),)]
    assert [c for c, _ in result.solved] == [((7, 1),)]


def test_coefficient_box():
    box = coefficient_box(3, 2, min_norm=2)
    assert all(math.gcd(p, q) == 1 and math.hypot(p, q) >= 2 for p, q in box)
    assert (3, 2) in box and (2, 2) not in box and (-3, 0) not in box


def test_rigidity_first_derivatives(rigidity):
    assert rigidity.entries
    assert {e.kind for e in rigidity.entries} == {"edge_length", "angle", "boundary_edge"}
    assert rigidity.max_derivative <= 1e-6
    assert "surrogate" in rigidity.note and "Teichm" not in rigidity.note


def test_rigidity_flatness_order(rigidity):
    # every monitored quantity changes at least quadratically; on this
    # fixture the change is in fact of fourth order
    for e in rigidity.entries:
        assert e.order > 1.9


def test_rigidity_needs_cusps(km):
    with pytest.raises(ValueError, match="no tangent directions"):
        rigidity_check(km)
