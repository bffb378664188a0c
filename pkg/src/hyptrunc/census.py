"""
Exhaustive enumeration of small good triangulations (fixture generator).
"""

from __future__ import annotations

from itertools import combinations, permutations

from .triangulation import (
    TetSpec,
    Triangulation,
    TriangulationError,
    isomorphism_signature,
    perm_parity,
)

__all__ = ["face_pairings", "enumerate_gluings"]

_ODD = [p for p in permutations(range(4)) if perm_parity(p)]
_NEW_TET_PERM = (1, 0, 2, 3)


def face_pairings(t: int):
    """
    Yield connected orientable gluings of ``t`` tetrahedra as lists of 4-lists
    of ``(target, perm)``.

    The lowest unglued face is paired either with a free face of a tetrahedron
    already reached, using each of the three odd bijections, or with a face of
    the next unused tetrahedron through the fixed map ``1023`` (the new
    tetrahedron's labeling is free, so nothing is lost up to isomorphism).
    """
    glue = [[None] * 4 for _ in range(t)]

    def rec(reached):
        for i in range(reached):
            for f in range(4):
                if glue[i][f] is None:
                    break
            else:
                continue
            break
        else:
            if reached == t:
                yield [list(g) for g in glue]
            return
        for j in range(reached):
            for g in range(4):
                if glue[j][g] is not None or (j == i and g == f):
                    continue
                for perm in _ODD:
                    if perm[f] != g:
                        continue
                    inv = tuple(sorted(range(4), key=lambda w: perm[w]))
                    glue[i][f] = (j, perm)
                    glue[j][g] = (i, inv)
                    yield from rec(reached)
                    glue[i][f] = glue[j][g] = None
        if reached < t:
            perm = _NEW_TET_PERM
            j, g = reached, perm[f]
            inv = tuple(sorted(range(4), key=lambda w: perm[w]))
            glue[i][f] = (j, perm)
            glue[j][g] = (i, inv)
            yield from rec(reached + 1)
            glue[i][f] = glue[j][g] = None

    yield from rec(1)


def _vertex_classes(gluing):
    parent = {(i, v): (i, v) for i in range(len(gluing)) for v in range(4)}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i, faces in enumerate(gluing):
        for f, (j, perm) in enumerate(faces):
            for w in range(4):
                if w != f:
                    a, b = find((i, w)), find((j, perm[w]))
                    if a != b:
                        parent[max(a, b)] = min(a, b)
    classes = {}
    for key in sorted(parent):
        classes.setdefault(find(key), []).append(key)
    return list(classes.values())


def enumerate_gluings(t_max: int, ideal_budget: int = 0) -> list[Triangulation]:
    """
    All good triangulations with at most ``t_max`` tetrahedra and at most
    ``ideal_budget`` tetrahedra carrying an ideal vertex, one per
    orientation-preserving isomorphism class, sorted by signature.
    """
    if t_max > 3:
        raise ValueError("enumeration is limited to t_max <= 3")
    found = {}
    for t in range(1, t_max + 1):
        for gluing in face_pairings(t):
            classes = _vertex_classes(gluing)
            for r in range(len(classes) + 1):
                for chosen in combinations(classes, r):
                    ideal = [[False] * 4 for _ in range(t)]
                    for vc in chosen:
                        for i, v in vc:
                            ideal[i][v] = True
                    if any(sum(row) > 1 for row in ideal):
                        continue
                    if sum(any(row) for row in ideal) > ideal_budget:
                        continue
                    tets = [TetSpec(tuple(ideal[i]), tuple(gluing[i])) for i in range(t)]
                    try:
                        tri = Triangulation(tets)
                    except TriangulationError:
                        continue
                    sig = isomorphism_signature(tets)
                    if sig not in found:
                        found[sig] = tri
    return [found[sig] for sig in sorted(found)]
