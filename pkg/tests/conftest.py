import math

import numpy as np
import pytest

from hyptrunc.data import load
from hyptrunc.equations import build
from hyptrunc.solver import solve_complete, tangent_basis


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])


@pytest.fixture
def record():
    """Store and print the PASS/FAIL line of an acceptance criterion."""

    def _record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE[number] = line
        print(line)
        return ok

    return _record


@pytest.fixture(scope="session")
def km():
    return load("kojima_miyamoto")


@pytest.fixture(scope="session")
def cusped():
    return load("one_cusp")


@pytest.fixture(scope="session")
def cusped_system(cusped):
    return build(cusped)[1]


@pytest.fixture(scope="session")
def cusped_solution(cusped_system):
    return solve_complete(cusped_system, tol=1e-13)


@pytest.fixture(scope="session")
def cusped_basis(cusped_system, cusped_solution):
    return tangent_basis(cusped_system, cusped_solution.x)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_tet_angles(rng, ideal_vertex=None, low=0.15):
    """Angles of one tetrahedron drawn well inside the geometric domain."""
    from hyptrunc.triangulation import EDGES

    while True:
        theta = rng.uniform(low, math.pi / 3, 6)
        if ideal_vertex is not None:
            at_v = [k for k, e in enumerate(EDGES) if ideal_vertex in e]
            theta[at_v] *= math.pi / theta[at_v].sum()
        ok = True
        for v in range(4):
            if v == ideal_vertex:
                continue
            if sum(theta[k] for k, e in enumerate(EDGES) if v in e) >= math.pi - 0.1:
                ok = False
        if ok and theta.min() > 0.05 and theta.max() < math.pi - 0.05:
            return theta


def random_point(rng, tri):
    return np.array([random_tet_angles(rng, v) for v in tri.ideal_vertices])
