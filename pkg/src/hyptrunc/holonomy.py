"""
Linear parts of the cusp holonomies from products of cusp-triangle shapes.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .geometry import DomainError, triangle_modulus
from .peripheral import check_loop, right_corners, visits

__all__ = ["BranchError", "CuspHolonomy", "principal_log", "loop_holonomy", "vertex_turn", "eval_uv"]


class BranchError(DomainError):
    """A holonomy left the half-plane ``Re > 0`` where ``ln`` is defined."""

    def __init__(self, cusp: int, which: str, value: complex):
        self.cusp = cusp
        super().__init__(f"cusp {cusp}: {which} = {value:.6g} has Re <= 0")


@dataclass(frozen=True)
class CuspHolonomy:
    """Per cusp: holonomies ``a``, ``b`` of meridian and longitude and their logs."""

    a: np.ndarray
    b: np.ndarray
    u: np.ndarray
    v: np.ndarray


def loop_holonomy(theta, link, loop) -> complex:
    """
    ``(-1)^n`` times the product of the shapes of all corners lying to the
    right of ``loop`` at its ``n`` vertex visits (counted with multiplicity).

    ``theta`` is the ``(t, 6)`` angle array.
    """
    loop = check_loop(link, loop) if loop else ()
    value = complex(1.0)
    for q, w_in, w_out in visits(link, loop):
        for tet, v, a in right_corners(link, q, w_in, w_out):
            value *= triangle_modulus(theta[tet], v, a)
    return (-1) ** len(loop) * value


def vertex_turn(theta, link, vertex: int) -> complex:
    """Product of all corner shapes around a link vertex (1 when it closes up)."""
    value = complex(1.0)
    for tet, v, a in link.vertex_fans[vertex]:
        value *= triangle_modulus(theta[tet], v, a)
    return value


def principal_log(z: complex, cusp: int = 0, which: str = "a") -> complex:
    """``ln z`` on the half-plane ``Re z > 0`` (so ``ln 1 = 0``)."""
    if z.real <= 0:
        raise BranchError(cusp, which, z)
    return cmath.log(z)


def eval_uv(theta, tri) -> CuspHolonomy:
    a, b = [], []
    for cusp in tri.cusps:
        a.append(loop_holonomy(theta, cusp, cusp.meridian))
        b.append(loop_holonomy(theta, cusp, cusp.longitude))
    u = [principal_log(z, n, "a") for n, z in enumerate(a)]
    v = [principal_log(z, n, "b") for n, z in enumerate(b)]
    return CuspHolonomy(np.array(a), np.array(b), np.array(u), np.array(v))
