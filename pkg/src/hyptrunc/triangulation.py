"""
Combinatorics of good partially truncated triangulations.

Conventions
-----------
Vertices of a tetrahedron are 0..3 and face ``f`` is the face opposite
vertex ``f``.  A gluing of face ``f`` of tetrahedron ``i`` is a pair
``(j, perm)`` where ``perm`` is a permutation of ``(0, 1, 2, 3)`` with
``perm[f]`` the face of ``j`` receiving face ``f``; the three vertices of
face ``f`` are carried to the vertices of that face by ``perm``.

Every tetrahedron carries the right-handed labeling.  A face ``f`` is
oriented by the cycle ``(a, b, c)`` with ``(f, a, b, c)`` an even
permutation, and gluings must be odd so that they reverse face orientations.
The same parity rule orients the links of vertices: the link triangle at
``v`` has positive corner cycle ``(a, b, c)`` when ``(v, a, b, c)`` is even.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

__all__ = [
    "EDGES",
    "EDGE_INDEX",
    "TriangulationError",
    "TetSpec",
    "EdgeClass",
    "LinkSurface",
    "CuspLink",
    "Triangulation",
    "perm_parity",
    "positive_cycle",
]

#: tetrahedron edges as vertex pairs; angle vectors use this order
EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {}
for _k, (_a, _b) in enumerate(EDGES):
    EDGE_INDEX[(_a, _b)] = _k
    EDGE_INDEX[(_b, _a)] = _k
del _k, _a, _b

IDENTITY = (0, 1, 2, 3)


class TriangulationError(ValueError):
    """Raised when gluing data violates an invariant of a good triangulation."""


def perm_parity(perm) -> int:
    """Return 0 for even permutations and 1 for odd ones."""
    inversions = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inversions += 1
    return inversions % 2


def positive_cycle(v: int, a: int) -> tuple[int, int]:
    """
    The two vertices ``(b, c)`` such that ``(v, a, b, c)`` is even.

    In the link of ``v`` the corner at ``a`` has first side towards ``b``
    and second side towards ``c`` in the counterclockwise order.
    """
    b, c = [w for w in range(4) if w not in (v, a)]
    if perm_parity((v, a, b, c)):
        b, c = c, b
    return b, c


def compose(p, q):
    """``p o q`` as a tuple."""
    return tuple(p[q[i]] for i in range(4))


def inverse(p):
    inv = [0] * 4
    for i, pi in enumerate(p):
        inv[pi] = i
    return tuple(inv)


@dataclass(frozen=True)
class TetSpec:
    """Ideal flags and the four face gluings of one tetrahedron."""

    ideal: tuple[bool, bool, bool, bool]
    gluings: tuple[tuple[int, tuple[int, int, int, int]], ...]

    def __post_init__(self):
        object.__setattr__(self, "ideal", tuple(bool(b) for b in self.ideal))
        object.__setattr__(
            self,
            "gluings",
            tuple((int(j), tuple(int(x) for x in perm)) for j, perm in self.gluings),
        )

    @property
    def ideal_vertex(self) -> int | None:
        for v, flag in enumerate(self.ideal):
            if flag:
                return v
        return None


@dataclass(frozen=True)
class EdgeClass:
    """
    An edge of the triangulation.

    ``slots`` lists the incident tetrahedron-edges as oriented triples
    ``(tet, a, b)`` in the cyclic order met when rotating around the edge.
    ``cusp`` is the cusp at the ideal end, or ``None`` for compact edges.
    """

    index: int
    slots: tuple[tuple[int, int, int], ...]
    cusp: int | None

    @property
    def valence(self) -> int:
        return len(self.slots)

    @property
    def compact(self) -> bool:
        return self.cusp is None

    def angle_slots(self):
        """``(tet, edge_index)`` pairs, one per slot."""
        return [(tet, EDGE_INDEX[(a, b)]) for tet, a, b in self.slots]


@dataclass
class LinkSurface:
    """
    Triangulated surface formed by the links of one vertex class.

    Triangles are ``(tet, v)``.  Corners are ``(tet, v, a)``.  A directed
    side ``(tet, v, x, y)`` runs from corner ``x`` to corner ``y`` of the
    triangle ``(tet, v)``; both triangles adjacent to a link edge describe it,
    and :meth:`canonical` picks the lexicographically smaller description.
    """

    triangles: list[tuple[int, int]]
    tets: list[TetSpec] = field(repr=False)

    def __post_init__(self):
        self._build_vertices()

    def across(self, side):
        """The other description of a directed side."""
        tet, v, x, y = side
        f = ({0, 1, 2, 3} - {v, x, y}).pop()
        j, perm = self.tets[tet].gluings[f]
        return (j, perm[v], perm[x], perm[y])

    def canonical(self, side):
        return min(side, self.across(side))

    def _build_vertices(self):
        # counterclockwise rotation: corner (t,v,a) with cycle (a,b,c) is
        # followed by the corner across side a->c
        corners = []
        for tet, v in self.triangles:
            for a in range(4):
                if a != v:
                    corners.append((tet, v, a))
        seen = set()
        self.vertex_of_corner = {}
        self.vertex_fans = []
        for start in corners:
            if start in seen:
                continue
            fan = []
            corner = start
            while corner not in seen:
                seen.add(corner)
                self.vertex_of_corner[corner] = len(self.vertex_fans)
                fan.append(corner)
                tet, v, a = corner
                _, c = positive_cycle(v, a)
                j, v2, a2, _ = self.across((tet, v, a, c))
                corner = (j, v2, a2)
            if corner != start:
                raise TriangulationError("vertex link is not a closed surface")
            self.vertex_fans.append(fan)
        # half-edges around each vertex, in counterclockwise order; corner k of
        # the fan sits between half_edges[k] and half_edges[k + 1]
        self.vertex_half_edges = []
        for fan in self.vertex_fans:
            hes = []
            for tet, v, a in fan:
                b, _ = positive_cycle(v, a)
                hes.append(self.canonical((tet, v, a, b)))
            self.vertex_half_edges.append(hes)
        edges = set()
        for tet, v in self.triangles:
            for x, y in combinations([w for w in range(4) if w != v], 2):
                edges.add(self.canonical((tet, v, x, y)))
                edges.add(self.canonical((tet, v, y, x)))
        # an undirected edge is a pair of opposite directed sides
        undirected = set()
        for s in edges:
            r = self.canonical((s[0], s[1], s[3], s[2]))
            undirected.add(min(s, r))
        self.edges = sorted(undirected)
        self.edge_id = {}
        for k, s in enumerate(self.edges):
            self.edge_id[s] = (k, 1)
            self.edge_id[self.canonical((s[0], s[1], s[3], s[2]))] = (k, -1)

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_fans)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_triangles

    def tail(self, side) -> int:
        tet, v, x, _ = side
        return self.vertex_of_corner[(tet, v, x)]

    def head(self, side) -> int:
        tet, v, _, y = side
        return self.vertex_of_corner[(tet, v, y)]

    def reverse(self, side):
        tet, v, x, y = side
        return self.canonical((tet, v, y, x))

    def directed(self, edge: int, sign: int):
        s = self.edges[edge]
        return s if sign > 0 else self.reverse(s)


class CuspLink(LinkSurface):
    """Link torus of a cusp, with its peripheral curves."""

    index: int
    meridian: tuple
    longitude: tuple


def _orbit_edges(tets, tet, a, b):
    c, d = [w for w in range(4) if w not in (a, b)]
    state = (tet, a, b, c, d)
    start = state
    slots = []
    while True:
        i, a, b, c, d = state
        slots.append((i, a, b))
        j, perm = tets[i].gluings[c]
        state = (j, perm[a], perm[b], perm[d], perm[c])
        if state == start:
            return slots
        if len(slots) > 6 * len(tets):
            raise TriangulationError("edge orbit does not close")


class Triangulation:
    """
    A validated, fully indexed good partially truncated triangulation.

    Parameters
    ----------
    tets : sequence of TetSpec
    curves : dict, optional
        Maps a cusp index to a ``(meridian, longitude)`` pair of loops, each a
        sequence of directed link sides ``(tet, v, x, y)``.  Missing cusps get
        the deterministic basis of :func:`peripheral_basis`.
    angles : array_like, optional
        Initial dihedral angles, shape ``(t, 6)``, carried along from a file.
    """

    def __init__(self, tets, curves=None, angles=None):
        self.tets = [t if isinstance(t, TetSpec) else TetSpec(*t) for t in tets]
        self.initial_angles = None if angles is None else np.asarray(angles, float)
        self._check_gluings()
        self._build_vertex_classes()
        self._build_edge_classes()
        self._build_links()
        self._check_counts()
        from .peripheral import peripheral_basis

        curves = curves or {}
        for cusp in self.cusps:
            cusp.meridian, cusp.longitude = peripheral_basis(
                self, cusp.index, curves.get(cusp.index)
            )

    # -- construction ------------------------------------------------------

    def _check_gluings(self):
        t = len(self.tets)
        if t == 0:
            raise TriangulationError("no tetrahedra")
        for i, tet in enumerate(self.tets):
            if len(tet.ideal) != 4 or len(tet.gluings) != 4:
                raise TriangulationError(f"tetrahedron {i} needs 4 flags and 4 gluings")
            n_ideal = sum(tet.ideal)
            if n_ideal > 1:
                raise TriangulationError(
                    f"tetrahedron {i} has {n_ideal} ideal vertices: not a good triangulation"
                )
        for i, tet in enumerate(self.tets):
            for f, (j, perm) in enumerate(tet.gluings):
                where = f"tetrahedron {i} face {f}"
                if not 0 <= j < t:
                    raise TriangulationError(f"{where}: no tetrahedron {j}")
                if sorted(perm) != [0, 1, 2, 3]:
                    raise TriangulationError(f"{where}: {perm} is not a permutation")
                if not perm_parity(perm):
                    raise TriangulationError(
                        f"{where}: gluing permutation {''.join(map(str, perm))} is even "
                        "(orientation-reversing gluings must be odd)"
                    )
                back_j, back_perm = self.tets[j].gluings[perm[f]]
                if back_j != i or compose(back_perm, perm) != IDENTITY:
                    raise TriangulationError(f"{where}: gluing is not involutive")
                if j == i and perm[f] == f:
                    raise TriangulationError(f"{where}: face glued to itself")
                for w in range(4):
                    if w != f and tet.ideal[w] != self.tets[j].ideal[perm[w]]:
                        raise TriangulationError(
                            f"{where}: ideal flags mismatch "
                            f"(vertex {w} glued to vertex {perm[w]} of tetrahedron {j})"
                        )
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for j, _ in self.tets[i].gluings:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        if len(seen) != t:
            raise TriangulationError("triangulation is not connected")

    def _build_vertex_classes(self):
        parent = {(i, v): (i, v) for i in range(len(self.tets)) for v in range(4)}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, tet in enumerate(self.tets):
            for f, (j, perm) in enumerate(tet.gluings):
                for w in range(4):
                    if w != f:
                        ra, rb = find((i, w)), find((j, perm[w]))
                        if ra != rb:
                            parent[max(ra, rb)] = min(ra, rb)
        classes = {}
        for key in sorted(parent):
            classes.setdefault(find(key), []).append(key)
        self.vertex_classes = sorted(classes.values())

    def _build_edge_classes(self):
        self.edge_classes = []
        self.tet_edge_class = np.full((len(self.tets), 6), -1, dtype=int)
        cusp_of_class = {}
        ideal_classes = [vc for vc in self.vertex_classes if self.tets[vc[0][0]].ideal[vc[0][1]]]
        for n, vc in enumerate(ideal_classes):
            for key in vc:
                cusp_of_class[key] = n
        for i in range(len(self.tets)):
            for k, (a, b) in enumerate(EDGES):
                if self.tet_edge_class[i, k] >= 0:
                    continue
                slots = _orbit_edges(self.tets, i, a, b)
                index = len(self.edge_classes)
                visited = set()
                for tet, x, y in slots:
                    e = EDGE_INDEX[(x, y)]
                    if (tet, e) in visited:
                        raise TriangulationError(
                            f"edge {x}{y} of tetrahedron {tet} is identified with itself"
                        )
                    visited.add((tet, e))
                    self.tet_edge_class[tet, e] = index
                cusp = None
                for x in (a, b):
                    if self.tets[i].ideal[x]:
                        cusp = cusp_of_class[(i, x)]
                self.edge_classes.append(EdgeClass(index, tuple(slots), cusp))

    def _build_links(self):
        self.cusps = []
        self.boundary = []
        for vc in self.vertex_classes:
            tet, v = vc[0]
            if self.tets[tet].ideal[v]:
                link = CuspLink(list(vc), self.tets)
                link.index = len(self.cusps)
                if link.euler_characteristic != 0:
                    raise TriangulationError(
                        f"cusp {link.index}: link has Euler characteristic "
                        f"{link.euler_characteristic}, not a torus"
                    )
                self.cusps.append(link)
            else:
                surface = LinkSurface(list(vc), self.tets)
                if surface.euler_characteristic >= 0:
                    raise TriangulationError(
                        f"boundary component at tetrahedron {tet} vertex {v} has "
                        f"Euler characteristic {surface.euler_characteristic} >= 0"
                    )
                self.boundary.append(surface)

    def _check_counts(self):
        compact_valence = sum(e.valence for e in self.edge_classes if e.compact)
        if compact_valence != 6 * self.c + 3 * self.p:
            raise TriangulationError("compact valences do not add up to 6c + 3p")
        if 2 * self.h != self.p:
            raise TriangulationError(f"h = {self.h} but p = {self.p}: h = p/2 fails")

    # -- counts --------------------------------------------------------------

    @property
    def t(self) -> int:
        return len(self.tets)

    @property
    def ideal_vertices(self) -> list[int | None]:
        return [tet.ideal_vertex for tet in self.tets]

    @property
    def p(self) -> int:
        return sum(v is not None for v in self.ideal_vertices)

    @property
    def c(self) -> int:
        return self.t - self.p

    @property
    def l(self) -> int:  # noqa: E743
        return sum(e.compact for e in self.edge_classes)

    @property
    def h(self) -> int:
        return len(self.edge_classes) - self.l

    @property
    def k(self) -> int:
        return len(self.cusps)

    @property
    def counts(self) -> dict[str, int]:
        return {"t": self.t, "c": self.c, "p": self.p, "l": self.l, "h": self.h, "k": self.k}

    def cusp_of_tet(self, tet: int) -> int | None:
        v = self.tets[tet].ideal_vertex
        if v is None:
            return None
        for cusp in self.cusps:
            if (tet, v) in cusp.triangles:
                return cusp.index
        raise AssertionError("ideal vertex missing from every cusp")

    def relabeled(self, order, vertex_maps=None) -> "Triangulation":
        """
        Copy with tetrahedron ``order[n]`` becoming tetrahedron ``n``.

        ``vertex_maps[n]``, if given, is an even permutation renaming the
        vertices of the new tetrahedron ``n`` (old label ``w`` becomes
        ``vertex_maps[n][w]``).
        """
        t = self.t
        new_index = {old: new for new, old in enumerate(order)}
        maps = [IDENTITY] * t if vertex_maps is None else [tuple(m) for m in vertex_maps]
        for m in maps:
            if perm_parity(m):
                raise ValueError("vertex relabelings must be even")
        new_tets = []
        for new, old in enumerate(order):
            rho = maps[new]
            tet = self.tets[old]
            ideal = [False] * 4
            gluings = [None] * 4
            for w in range(4):
                ideal[rho[w]] = tet.ideal[w]
            for f, (j, perm) in enumerate(tet.gluings):
                nj = new_index[j]
                new_perm = compose(maps[nj], compose(perm, inverse(rho)))
                gluings[rho[f]] = (nj, new_perm)
            new_tets.append(TetSpec(tuple(ideal), tuple(gluings)))
        angles = None
        if self.initial_angles is not None:
            angles = np.empty_like(self.initial_angles)
            for new, old in enumerate(order):
                rho = maps[new]
                for k, (a, b) in enumerate(EDGES):
                    angles[new, EDGE_INDEX[(rho[a], rho[b])]] = self.initial_angles[old, k]
        return Triangulation(new_tets, angles=angles)

    def __repr__(self):
        counts = " ".join(f"{k}={v}" for k, v in self.counts.items())
        return f"<Triangulation {counts}>"


def isomorphism_signature(tets) -> tuple:
    """
    Canonical form of a connected gluing up to orientation-preserving
    relabeling of tetrahedra and vertices.

    Every start (tetrahedron, even vertex relabeling) is expanded by a
    breadth-first walk in which each newly reached tetrahedron is relabeled
    so that the gluing reaching it reads ``1023``; the smallest encoding wins.
    """
    tets = [t if isinstance(t, TetSpec) else TetSpec(*t) for t in tets]
    even = [p for p in permutations(range(4)) if not perm_parity(p)]
    canon = (1, 0, 2, 3)
    best = None
    for start in range(len(tets)):
        for rho0 in even:
            order = [start]
            maps = {start: rho0}
            code = []
            n = 0
            while n < len(order):
                old = order[n]
                rho = maps[old]
                inv = inverse(rho)
                tet = tets[old]
                code.append(tuple(int(tet.ideal[inv[w]]) for w in range(4)))
                for nf in range(4):
                    f = inv[nf]
                    j, perm = tet.gluings[f]
                    if j not in maps:
                        # choose rho_j so that rho_j o perm o rho^-1 == canon
                        maps[j] = compose(canon, compose(rho, inverse(perm)))
                        order.append(j)
                    new_perm = compose(maps[j], compose(perm, inv))
                    code.append((order.index(j),) + new_perm)
                n += 1
            code = tuple(code)
            if best is None or code < best:
                best = code
    return best
