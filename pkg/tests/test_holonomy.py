import cmath

import numpy as np
import pytest

from hyptrunc.holonomy import BranchError, eval_uv, loop_holonomy, principal_log, vertex_turn
from hyptrunc.solver import solve_deformed
from hyptrunc.triangulation import Triangulation

TARGETS = [0.03j, 0.02 + 0.01j, -0.04, 0.01 - 0.03j]


@pytest.fixture(scope="module")
def deformed_points(cusped_system, cusped_solution):
    return [solve_deformed(cusped_system, [u], cusped_solution.x).angles for u in TARGETS]


def reverse(link, loop):
    return tuple(link.reverse(s) for s in reversed(loop))


def two_side_detour(link, loop):
    """Replace the first side by the other two sides of its triangle."""
    tet, v, x, y = loop[0]
    (z,) = [w for w in range(4) if w not in (v, x, y)]
    return ((tet, v, x, z), (tet, v, z, y)) + tuple(loop[1:])


def test_constant_loop(cusped, cusped_solution):
    assert loop_holonomy(cusped_solution.angles, cusped.cusps[0], ()) == 1


def test_complete_point(cusped, cusped_solution):
    hol = eval_uv(cusped_solution.angles, cusped)
    assert abs(hol.a[0] - 1) < 1e-12 and abs(hol.b[0] - 1) < 1e-12
    assert abs(hol.u[0]) < 1e-10 and abs(hol.v[0]) < 1e-10


def test_reverse_gives_reciprocal(cusped, deformed_points):
    link = cusped.cusps[0]
    for theta in deformed_points:
        for loop in (link.meridian, link.longitude):
            fwd = loop_holonomy(theta, link, loop)
            back = loop_holonomy(theta, link, reverse(link, loop))
            assert abs(fwd * back - 1) < 1e-10


def test_vertex_turn_closes(cusped, cusped_solution, deformed_points):
    link = cusped.cusps[0]
    for theta in [cusped_solution.angles] + deformed_points:
        for q in range(link.num_vertices):
            assert abs(vertex_turn(theta, link, q) - 1) < 1e-10


def test_homologous_representatives(cusped, deformed_points):
    link = cusped.cusps[0]
    for loop in (link.meridian, link.longitude):
        detour = two_side_detour(link, loop)
        assert len(detour) == len(loop) + 1
        for theta in deformed_points:
            assert abs(loop_holonomy(theta, link, detour) - loop_holonomy(theta, link, loop)) < 1e-10


def test_basis_change(cusped, cusped_system, deformed_points):
    link = cusped.cusps[0]
    swapped = Triangulation(
        cusped.tets, curves={0: (link.longitude, reverse(link, link.meridian))}
    )
    for theta in deformed_points:
        old = eval_uv(theta, cusped)
        new = eval_uv(theta, swapped)
        assert abs(new.u[0] - old.v[0]) < 1e-10
        assert abs(new.v[0] + old.u[0]) < 1e-10


def test_u_and_v_vanish_together(cusped, deformed_points):
    for u, theta in zip(TARGETS, deformed_points):
        hol = eval_uv(theta, cusped)
        assert abs(hol.u[0] - u) < 1e-10
        assert abs(hol.v[0]) > 0.1 * abs(u)


def test_principal_log():
    assert principal_log(1.0 + 0j) == 0
    assert principal_log(2.5 + 0j).imag == 0
    z = cmath.exp(1.2j)
    assert principal_log(z) == pytest.approx(1.2j, abs=1e-15)
    with pytest.raises(BranchError) as err:
        principal_log(-1 + 0j, cusp=3)
    assert err.value.cusp == 3


def test_reverse_off_shell_gives_vertex_turns(cusped, rng):
    # forward and backward sweeps at a visit make up the full turn, so away
    # from the solution set the product is the turn at each visited vertex
    from conftest import random_point

    link = cusped.cusps[0]
    for _ in range(20):
        theta = random_point(rng, cusped)
        for loop in (link.meridian, link.longitude, two_side_detour(link, link.meridian)):
            fwd = loop_holonomy(theta, link, loop)
            back = loop_holonomy(theta, link, reverse(link, loop))
            turns = np.prod([vertex_turn(theta, link, link.head(s)) for s in loop])
            assert abs(fwd * back - turns) < 1e-12 * abs(turns)
