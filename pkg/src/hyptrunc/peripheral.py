"""
Simplicial loops on cusp tori: closedness, intersection numbers and the
deterministic choice of a peripheral basis.

A loop is a sequence of directed link sides ``(tet, v, x, y)`` (see
:class:`~hyptrunc.triangulation.LinkSurface`), each ending where the next one
starts.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations

import numpy as np

from .triangulation import TriangulationError

__all__ = [
    "visits",
    "right_corners",
    "intersection_number",
    "fundamental_cycles",
    "homological_euler_characteristic",
    "check_loop",
    "peripheral_basis",
]


def check_loop(link, loop):
    """Canonicalize ``loop`` on ``link`` and make sure it closes up."""
    sides = []
    for side in loop:
        side = tuple(int(x) for x in side)
        tet, v = side[0], side[1]
        if (tet, v) not in link.triangles:
            raise TriangulationError(f"side {side} does not lie on this cusp")
        if len({v, side[2], side[3]}) != 3:
            raise TriangulationError(f"side {side} is not a side of the link triangle")
        sides.append(link.canonical(side))
    for k, side in enumerate(sides):
        nxt = sides[(k + 1) % len(sides)]
        if link.head(side) != link.tail(nxt):
            raise TriangulationError("curve is not closed")
    return tuple(sides)


def visits(link, loop):
    """
    Yield ``(vertex, w_in, w_out)`` for each vertex visit of a closed loop,
    where ``w_in`` points back along the arriving side and ``w_out`` along
    the leaving one.
    """
    n = len(loop)
    for k in range(n):
        arriving = loop[k]
        leaving = loop[(k + 1) % n]
        yield link.head(arriving), link.reverse(arriving), leaving


def _sector(link, vertex, w_in, w_out):
    """Positions swept counterclockwise from ``w_in`` to ``w_out``."""
    hes = link.vertex_half_edges[vertex]
    m = len(hes)
    i, j = hes.index(w_in), hes.index(w_out)
    span = (j - i) % m or m
    return [(i + s) % m for s in range(span)]


def right_corners(link, vertex, w_in, w_out):
    """Corners ``(tet, v, a)`` on the right of a path turning at ``vertex``."""
    fan = link.vertex_fans[vertex]
    return [fan[pos] for pos in _sector(link, vertex, w_in, w_out)]


def intersection_number(link, alpha, beta) -> int:
    """
    Algebraic intersection number of two closed simplicial loops.

    ``alpha`` is pushed off to its right; each crossing with a ray of ``beta``
    inside a swept sector counts +1 for arriving rays and -1 for leaving rays,
    so that on a standard square torus ``x . y = +1``.
    """
    by_vertex = {}
    for q, b_in, b_out in visits(link, beta):
        by_vertex.setdefault(q, []).append((b_in, b_out))
    total = 0
    for q, a_in, a_out in visits(link, alpha):
        if q not in by_vertex:
            continue
        hes = link.vertex_half_edges[q]
        # open sector: drop the ray alpha arrives along
        inside = {hes[pos] for pos in _sector(link, q, a_in, a_out)[1:]}
        for b_in, b_out in by_vertex[q]:
            total += (b_in in inside) - (b_out in inside)
    return total


def fundamental_cycles(link):
    """
    Fundamental cycles of a breadth-first spanning tree of the link 1-skeleton,
    one per non-tree edge, in edge order.
    """
    adjacency = {q: [] for q in range(link.num_vertices)}
    for e in range(link.num_edges):
        for sign in (1, -1):
            side = link.directed(e, sign)
            adjacency[link.tail(side)].append((e, sign, side))
    parent = {0: None}
    tree_edges = set()
    queue = deque([0])
    while queue:
        q = queue.popleft()
        for e, sign, side in sorted(adjacency[q]):
            r = link.head(side)
            if r not in parent:
                parent[r] = side
                tree_edges.add(e)
                queue.append(r)

    def path_from_root(q):
        path = []
        while parent[q] is not None:
            path.append(parent[q])
            q = link.tail(parent[q])
        return path[::-1]

    cycles = []
    for e in range(link.num_edges):
        if e in tree_edges:
            continue
        side = link.directed(e, 1)
        to_tail = path_from_root(link.tail(side))
        to_head = path_from_root(link.head(side))
        # drop the common trunk so the cycle is simple
        n = 0
        while n < min(len(to_tail), len(to_head)) and to_tail[n] == to_head[n]:
            n += 1
        back = [link.reverse(s) for s in reversed(to_head[n:])]
        cycles.append(tuple([side] + back + to_tail[n:]))
    return cycles


def homological_euler_characteristic(link) -> int:
    """``2 - rank`` of the intersection form on the fundamental cycles."""
    cycles = fundamental_cycles(link)
    if not cycles:
        return 2
    form = np.array(
        [[intersection_number(link, a, b) for b in cycles] for a in cycles], dtype=float
    )
    return 2 - int(np.linalg.matrix_rank(form))


def peripheral_basis(tri, cusp: int, curves=None):
    """
    Meridian and longitude of a cusp torus with intersection number +1.

    User-supplied ``curves`` are validated and returned unchanged; otherwise
    the first pair of fundamental cycles (in lexicographic order) that meet
    once algebraically is taken, reversing the longitude if needed.
    """
    link = tri.cusps[cusp]
    if curves is not None:
        mu, lam = (check_loop(link, c) for c in curves)
        if intersection_number(link, mu, lam) != 1:
            raise TriangulationError(f"cusp {cusp}: curves not independent")
        return mu, lam
    cycles = fundamental_cycles(link)
    for mu, lam in combinations(cycles, 2):
        n = intersection_number(link, mu, lam)
        if n == 1:
            return mu, lam
        if n == -1:
            return mu, tuple(link.reverse(s) for s in reversed(lam))
    raise TriangulationError(f"cusp {cusp}: no peripheral basis found (indexing bug)")
