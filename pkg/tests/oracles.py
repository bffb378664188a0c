"""
Independent reference computations for tetrahedron geometry.

The internal edge lengths of a truncated tetrahedron come from its Gram
matrix: ``G_ii = 1`` and ``G_ij = -cos`` of the dihedral angle at the edge
shared by the faces ``i`` and ``j`` (the edge joining the two other
vertices).  With ``C`` the cofactor matrix, the edge joining vertices ``a``
and ``b`` has ``cosh L = C_ab / sqrt(C_aa C_bb)``.
"""

import math

import numpy as np

EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def gram(theta):
    G = np.eye(4)
    for k, (a, b) in enumerate(EDGES):
        i, j = (w for w in range(4) if w not in (a, b))
        G[i, j] = G[j, i] = -math.cos(theta[k])
    return G


def cofactors(M):
    C = np.empty_like(M)
    for i in range(4):
        for j in range(4):
            minor = np.delete(np.delete(M, i, axis=0), j, axis=1)
            C[i, j] = (-1) ** (i + j) * np.linalg.det(minor)
    return C


def gram_edge_cosh(theta, a, b):
    C = cofactors(gram(theta))
    return C[a, b] / math.sqrt(C[a, a] * C[b, b])


# values at the regular point, all angles pi/6, worked out by hand
SQ3 = math.sqrt(3.0)
REGULAR_D = (3 * SQ3 + 5) / 4
REGULAR_C = 3 * SQ3 / 4 + 1.5 + SQ3 / 8
REGULAR_BOUNDARY_COSH = 3 + 2 * SQ3
