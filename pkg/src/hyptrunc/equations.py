"""
The reduced consistency system of a triangulation over a chart of the
angle domain, and finite-difference Jacobians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import DomainError, HexagonRef, check_tet, internal_edge_length, sigma
from .triangulation import EDGES, Triangulation

__all__ = ["Chart", "ReducedSystem", "build", "eval_FA", "jacobian", "jacobian_FA", "default_angles"]

TWO_PI = 2 * math.pi


class Chart:
    """
    Free angle coordinates on the angle domain.

    For a tetrahedron with an ideal vertex, the first edge at that vertex (in
    edge order) is dropped and recovered as ``pi`` minus the other two.
    """

    def __init__(self, tri: Triangulation):
        self.t = tri.t
        self.ideal_vertices = tri.ideal_vertices
        self.eliminated = {}
        index = []
        for i, v in enumerate(self.ideal_vertices):
            if v is None:
                index.extend((i, k) for k in range(6))
                continue
            at_v = [k for k, e in enumerate(EDGES) if v in e]
            self.eliminated[i] = (at_v[0], at_v[1], at_v[2])
            index.extend((i, k) for k in range(6) if k != at_v[0])
        self.free = index
        self._rows = np.array([i for i, _ in index])
        self._cols = np.array([k for _, k in index])

    @property
    def dim(self) -> int:
        return len(self.free)

    def angles(self, x) -> np.ndarray:
        """Angle array of shape ``(t, 6)`` for the free vector ``x``."""
        theta = np.zeros((self.t, 6))
        theta[self._rows, self._cols] = x
        for i, (k0, k1, k2) in self.eliminated.items():
            theta[i, k0] = math.pi - theta[i, k1] - theta[i, k2]
        return theta

    def coords(self, theta) -> np.ndarray:
        theta = np.asarray(theta, float).reshape(self.t, 6)
        return theta[self._rows, self._cols].copy()

    def check(self, theta) -> None:
        for i, v in enumerate(self.ideal_vertices):
            check_tet(theta[i], v)


def default_angles(tri: Triangulation) -> np.ndarray:
    """
    Every angle pi/6, then the angles at each ideal vertex shifted equally
    onto the plane where they sum to pi (so they become pi/3).
    """
    theta = np.full((tri.t, 6), math.pi / 6)
    for i, v in enumerate(tri.ideal_vertices):
        if v is not None:
            at_v = [k for k, e in enumerate(EDGES) if v in e]
            theta[i, at_v] += (math.pi - theta[i, at_v].sum()) / 3
    return theta


@dataclass
class ReducedSystem:
    """
    Equations kept after discarding two redundant ones per cusp.

    ``length_pairs`` holds ``((tet, edge), (tet, edge))`` for consecutive
    slots of each compact edge class; ``sigma_pairs`` holds the kept pairs of
    glued exceptional hexagons; ``angle_classes`` the edge classes whose angle
    sum is kept.  The ``discarded_*`` maps record, per cusp, what was dropped.
    """

    tri: Triangulation
    chart: Chart
    length_pairs: list = field(default_factory=list)
    sigma_pairs: list = field(default_factory=list)
    angle_classes: list = field(default_factory=list)
    discarded_sigma: dict = field(default_factory=dict)
    discarded_angle: dict = field(default_factory=dict)
    all_sigma_pairs: list = field(default_factory=list)

    @property
    def n_F(self) -> int:
        return len(self.length_pairs) + len(self.sigma_pairs)

    @property
    def n_A(self) -> int:
        return len(self.angle_classes)

    @property
    def n_equations(self) -> int:
        return self.n_F + self.n_A

    def angles(self, x, check: bool = True) -> np.ndarray:
        theta = self.chart.angles(x)
        if check:
            self.chart.check(theta)
        return theta

    def lengths(self, theta) -> dict:
        """Internal edge lengths of every compact tetrahedron-edge."""
        out = {}
        for i, v in enumerate(self.tri.ideal_vertices):
            for k, (a, b) in enumerate(EDGES):
                if v not in (a, b):
                    out[(i, k)] = internal_edge_length(theta[i], a, b, v)
        return out

    def F(self, theta) -> np.ndarray:
        lengths = self.lengths(theta)
        res = [lengths[p] - lengths[q] for p, q in self.length_pairs]
        res += [sigma(theta[f.tet], f) + sigma(theta[g.tet], g) for f, g in self.sigma_pairs]
        return np.array(res, dtype=float)

    def angle_sum(self, theta, edge_class: int) -> float:
        cls = self.tri.edge_classes[edge_class]
        return sum(theta[i, k] for i, k in cls.angle_slots())

    def A(self, theta) -> np.ndarray:
        return np.array([self.angle_sum(theta, e) - TWO_PI for e in self.angle_classes])

    def A_matrix(self) -> np.ndarray:
        """Exact (integer) differential of the A block in free coordinates."""
        column = {slot: n for n, slot in enumerate(self.chart.free)}
        M = np.zeros((self.n_A, self.chart.dim))
        for r, e in enumerate(self.angle_classes):
            for i, k in self.tri.edge_classes[e].angle_slots():
                if (i, k) in column:
                    M[r, column[(i, k)]] += 1
                else:
                    _, k1, k2 = self.chart.eliminated[i]
                    M[r, column[(i, k1)]] -= 1
                    M[r, column[(i, k2)]] -= 1
        return M

    def sigma_residual(self, theta, pair) -> float:
        f, g = pair
        return sigma(theta[f.tet], f) + sigma(theta[g.tet], g)


def build(tri: Triangulation) -> tuple[Chart, ReducedSystem]:
    """
    Assemble the reduced system; per cusp, the lowest-index edge class and
    the lowest exceptional-hexagon pair at that cusp are dropped.
    """
    chart = Chart(tri)
    system = ReducedSystem(tri, chart)
    for cls in tri.edge_classes:
        if cls.compact:
            slots = cls.angle_slots()
            system.length_pairs.extend(zip(slots[:-1], slots[1:]))

    for cls in tri.edge_classes:
        if cls.cusp is not None and cls.cusp not in system.discarded_angle:
            system.discarded_angle[cls.cusp] = cls.index
        else:
            system.angle_classes.append(cls.index)

    seen = set()
    for i, v in enumerate(tri.ideal_vertices):
        if v is None:
            continue
        for f in range(4):
            if f == v or (i, f) in seen:
                continue
            j, perm = tri.tets[i].gluings[f]
            seen.update({(i, f), (j, perm[f])})
            pair = (HexagonRef.make(i, f, v), HexagonRef.make(j, perm[f], tri.ideal_vertices[j]))
            system.all_sigma_pairs.append(pair)
            cusp = tri.cusp_of_tet(i)
            if cusp not in system.discarded_sigma:
                system.discarded_sigma[cusp] = pair
            else:
                system.sigma_pairs.append(pair)

    expected = 6 * tri.t - tri.p - 2 * tri.k
    if system.n_equations != expected:
        raise AssertionError(f"{system.n_equations} equations, expected {expected}")
    if system.n_F != 6 * tri.t - tri.l - 3 * tri.p // 2 - tri.k:
        raise AssertionError("F block has the wrong size")
    return chart, system


def eval_FA(system: ReducedSystem, x) -> np.ndarray:
    """Residuals ``(F, A)`` at the free vector ``x``."""
    theta = system.angles(x)
    return np.concatenate([system.F(theta), system.A(theta)])


def jacobian(f, x, rel_step: float = 1e-6, max_halvings: int = 8) -> np.ndarray:
    """
    Central-difference Jacobian with step ``rel_step * max(1, |x_i|)``.

    A step that leaves the domain is halved up to ``max_halvings`` times.
    """
    x = np.asarray(x, float)
    columns = []
    for i in range(x.size):
        h = rel_step * max(1.0, abs(x[i]))
        for _ in range(max_halvings + 1):
            xp, xm = x.copy(), x.copy()
            xp[i] += h
            xm[i] -= h
            try:
                columns.append((np.asarray(f(xp)) - np.asarray(f(xm))) / (2 * h))
                break
            except DomainError as exc:
                last = exc
                h /= 2
        else:
            raise DomainError(f"finite-difference step in coordinate {i} leaves the domain ({last})")
    return np.column_stack(columns) if columns else np.zeros((0, 0))


def jacobian_FA(system: ReducedSystem, x) -> np.ndarray:
    """Differential of ``(F, A)``: finite differences for F, exact rows for A."""
    JF = jacobian(lambda y: system.F(system.angles(y)), x)
    return np.vstack([JF.reshape(-1, len(x)), system.A_matrix()])
