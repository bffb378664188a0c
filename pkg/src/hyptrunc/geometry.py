"""
Hyperbolic trigonometry of a single partially truncated tetrahedron.

All functions take ``theta``, the six dihedral angles of one tetrahedron in
the edge order of :data:`~hyptrunc.triangulation.EDGES`, and vertex labels
0..3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .triangulation import EDGE_INDEX, positive_cycle

__all__ = [
    "DomainError",
    "ACOSH_SLACK",
    "HexagonRef",
    "angle",
    "vertex_sum",
    "vertex_d",
    "edge_c",
    "boundary_edge_cosh",
    "boundary_edge_length",
    "internal_edge_length",
    "sigma",
    "ell",
    "triangle_modulus",
    "check_tet",
    "hexagons",
]

#: acosh arguments in [1 - ACOSH_SLACK, 1) are read as 1
ACOSH_SLACK = 1e-12


class DomainError(ValueError):
    """A quantity was requested outside the geometric angle domain."""


def _acosh(x: float, what: str) -> float:
    if x < 1.0:
        if x < 1.0 - ACOSH_SLACK:
            raise DomainError(f"{what}: cosh argument {x!r} < 1")
        return 0.0
    return math.acosh(x)


def angle(theta, a: int, b: int) -> float:
    return theta[EDGE_INDEX[(a, b)]]


def _others(*vs):
    return [w for w in range(4) if w not in vs]


def vertex_sum(theta, v: int) -> float:
    return sum(angle(theta, v, w) for w in _others(v))


def vertex_d(theta, v: int) -> float:
    """``2 c1 c2 c3 + c1^2 + c2^2 + c3^2 - 1`` for the angles at ``v``."""
    c1, c2, c3 = (math.cos(angle(theta, v, w)) for w in _others(v))
    return 2 * c1 * c2 * c3 + c1 * c1 + c2 * c2 + c3 * c3 - 1


def edge_c(theta, a: int, b: int) -> float:
    """
    Numerator of the internal edge length formula for the edge ``ab``.

    With ``e1 = ab``, ``e2 = ac``, ``e3 = ad``, ``e4 = cd``, ``e5 = bd``,
    ``e6 = bc``.
    """
    c, d = _others(a, b)
    cos = math.cos
    t1 = angle(theta, a, b)
    t2, t3 = angle(theta, a, c), angle(theta, a, d)
    t4 = angle(theta, c, d)
    t5, t6 = angle(theta, b, d), angle(theta, b, c)
    return (
        cos(t1) * (cos(t3) * cos(t6) + cos(t2) * cos(t5))
        + cos(t2) * cos(t6)
        + cos(t3) * cos(t5)
        + cos(t4) * math.sin(t1) ** 2
    )


def boundary_edge_cosh(theta, v: int, a: int, b: int) -> float:
    """cosh of the boundary edge at ``v`` between the edges ``va`` and ``vb``."""
    (c,) = _others(v, a, b)
    ti, tj, t3 = angle(theta, v, a), angle(theta, v, b), angle(theta, v, c)
    return (math.cos(ti) * math.cos(tj) + math.cos(t3)) / (math.sin(ti) * math.sin(tj))


def boundary_edge_length(theta, v: int, a: int, b: int, ideal: bool = False) -> float:
    """
    Length of the boundary edge at ``v`` between the edges ``va`` and ``vb``.

    Returns 0 when ``v`` is ideal.
    """
    if ideal:
        return 0.0
    return _acosh(boundary_edge_cosh(theta, v, a, b), f"boundary edge {v}:{a}{b}")


def internal_edge_length(theta, a: int, b: int, ideal_vertex: int | None = None) -> float:
    """Length of the internal edge ``ab``; both ends must be truncated."""
    if ideal_vertex in (a, b):
        raise DomainError(f"edge {a}{b} has an ideal endpoint: it has infinite length")
    da, db = vertex_d(theta, a), vertex_d(theta, b)
    if da <= 0 or db <= 0:
        raise DomainError(f"edge {a}{b}: vertex outside the hyperideal range")
    return _acosh(edge_c(theta, a, b) / math.sqrt(da * db), f"internal edge {a}{b}")


@dataclass(frozen=True)
class HexagonRef:
    """
    A lateral hexagon ``(tet, face)``.

    For an exceptional hexagon, ``ideal`` is the ideal vertex and the face
    boundary, oriented as the boundary of the tetrahedron, leaves ``ideal``
    along ``e1 = (ideal, a1)`` and comes back along ``e2 = (ideal, a2)``;
    ``e6 = (a1, a2)`` is the compact edge of the face.
    """

    tet: int
    face: int
    ideal: int | None = None
    a1: int | None = None
    a2: int | None = None

    @property
    def exceptional(self) -> bool:
        return self.ideal is not None

    @classmethod
    def make(cls, tet: int, face: int, ideal_vertex: int | None):
        if ideal_vertex is None or ideal_vertex == face:
            return cls(tet, face)
        # face boundary cycle (x, y, z) with (face, x, y, z) even; started at
        # the ideal vertex it reads (ideal, a1, a2)
        a1, a2 = positive_cycle(face, ideal_vertex)
        return cls(tet, face, ideal_vertex, a1, a2)

    def reversed(self) -> "HexagonRef":
        """The same face with the opposite boundary orientation."""
        return HexagonRef(self.tet, self.face, self.ideal, self.a2, self.a1)


def hexagons(tet: int, ideal_vertex: int | None) -> list[HexagonRef]:
    return [HexagonRef.make(tet, f, ideal_vertex) for f in range(4)]


def sigma(theta, hexagon: HexagonRef) -> float:
    """
    ``ln(sinh L(e16) / sinh L(e26))`` for an exceptional hexagon, where
    ``e16`` and ``e26`` are the boundary edges at the ends ``a1``, ``a2`` of
    the compact edge.
    """
    if not hexagon.exceptional:
        raise ValueError("sigma is only defined on exceptional hexagons")
    v, a1, a2 = hexagon.ideal, hexagon.a1, hexagon.a2
    y1 = boundary_edge_cosh(theta, a1, v, a2)
    y2 = boundary_edge_cosh(theta, a2, v, a1)
    # sinh(acosh y)^2 = y^2 - 1
    s1, s2 = y1 * y1 - 1.0, y2 * y2 - 1.0
    if s1 <= 0 or s2 <= 0 or y1 < 0 or y2 < 0:
        raise DomainError(f"degenerate exceptional hexagon {hexagon}")
    return 0.5 * math.log(s1 / s2)


def ell(theta, hexagon: HexagonRef) -> float:
    """Length of the compact edge of an exceptional hexagon."""
    if not hexagon.exceptional:
        raise ValueError("ell is only defined on exceptional hexagons")
    return internal_edge_length(theta, hexagon.a1, hexagon.a2, hexagon.ideal)


def triangle_modulus(theta, v: int, a: int) -> complex:
    """
    Shape of the cusp triangle at the ideal vertex ``v`` based at the corner
    on the edge ``va``: ``(sin t2 / sin t3) exp(i t1)`` with ``(a, b, c)`` the
    positive corner cycle and ``t1, t2, t3`` the angles of ``va, vb, vc``.
    """
    b, c = positive_cycle(v, a)
    t1, t2, t3 = angle(theta, v, a), angle(theta, v, b), angle(theta, v, c)
    return complex(math.sin(t2) / math.sin(t3)) * complex(math.cos(t1), math.sin(t1))


def check_tet(theta, ideal_vertex: int | None, tol: float = 1e-12) -> None:
    """Raise :class:`DomainError` unless ``theta`` realizes a geometric tetrahedron."""
    theta = np.asarray(theta, float)
    if not np.all((theta > 0) & (theta < math.pi)):
        raise DomainError("dihedral angle outside (0, pi)")
    for v in range(4):
        s = vertex_sum(theta, v)
        if v == ideal_vertex:
            if abs(s - math.pi) > tol:
                raise DomainError(f"angles at ideal vertex {v} sum to {s!r}, not pi")
        elif s >= math.pi:
            raise DomainError(f"angles at vertex {v} sum to {s!r} >= pi")
