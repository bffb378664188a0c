"""
Reading and writing the line-oriented triangulation format.

Example (the two-tetrahedron compact fixture)::

    format ptt 1
    # tet <index> <ideal flags> then <target> <perm> for faces 0..3
    tet 0 0000  0 1230  0 3012  1 1023  1 0321
    tet 1 0000  1 3201  0 0321  0 1023  1 2310

Optional records::

    curve <cusp> mu|lambda <tet>:<xy> ...   # directed link sides x -> y in
                                            # the link triangle at the ideal
                                            # vertex of <tet>
    angles <tet> a01 a02 a03 a12 a13 a23    # radians

Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .triangulation import EDGES, TetSpec, Triangulation, TriangulationError

__all__ = ["FormatError", "parse", "read", "dumps", "read_angles"]

FORMAT_VERSION = 1


class FormatError(ValueError):
    """Syntax error in a triangulation or angle file."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


def _perm(token: str, lineno: int):
    if not re.fullmatch(r"[0-3]{4}", token):
        raise FormatError(lineno, f"bad permutation {token!r} (expected 4 digits 0-3)")
    return tuple(int(ch) for ch in token)


def parse(text: str) -> Triangulation:
    """Parse a triangulation file and validate it."""
    records = {}
    curves = {}
    angles = {}
    version_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        kind = words[0]
        if kind == "format":
            if words[1:] != ["ptt", str(FORMAT_VERSION)]:
                raise FormatError(lineno, f"unsupported format line {line!r}")
            version_seen = True
        elif kind == "tet":
            if len(words) != 11:
                raise FormatError(lineno, "tet record needs index, flags and 4 gluings")
            try:
                index = int(words[1])
            except ValueError:
                raise FormatError(lineno, f"bad tetrahedron index {words[1]!r}") from None
            if not re.fullmatch(r"[01]{4}", words[2]):
                raise FormatError(lineno, f"bad ideal flags {words[2]!r}")
            if index in records:
                raise FormatError(lineno, f"tetrahedron {index} defined twice")
            gluings = []
            for f in range(4):
                target, perm = words[3 + 2 * f], words[4 + 2 * f]
                if not target.isdigit():
                    raise FormatError(lineno, f"bad target tetrahedron {target!r}")
                gluings.append((int(target), _perm(perm, lineno)))
            records[index] = TetSpec(tuple(ch == "1" for ch in words[2]), tuple(gluings))
        elif kind == "curve":
            if len(words) < 4 or words[2] not in ("mu", "lambda") or not words[1].isdigit():
                raise FormatError(lineno, "curve record: curve <cusp> mu|lambda <sides>")
            sides = []
            for token in words[3:]:
                m = re.fullmatch(r"(\d+):([0-3])([0-3])", token)
                if not m:
                    raise FormatError(lineno, f"bad link side {token!r}")
                sides.append((int(m[1]), int(m[2]), int(m[3])))
            curves.setdefault(int(words[1]), {})[words[2]] = sides
        elif kind == "angles":
            if len(words) != 8:
                raise FormatError(lineno, "angles record needs a tetrahedron and 6 values")
            try:
                angles[int(words[1])] = [float(w) for w in words[2:]]
            except ValueError:
                raise FormatError(lineno, "angles must be numbers") from None
        else:
            raise FormatError(lineno, f"unknown record {kind!r}")
    if not version_seen:
        raise FormatError(1, "missing 'format ptt 1' line")
    t = len(records)
    if sorted(records) != list(range(t)):
        raise TriangulationError("tetrahedra must be numbered 0..t-1")
    tets = [records[i] for i in range(t)]

    loops = {}
    for cusp, pair in curves.items():
        if set(pair) != {"mu", "lambda"}:
            raise TriangulationError(f"cusp {cusp}: both mu and lambda are needed")
        converted = []
        for name in ("mu", "lambda"):
            loop = []
            for tet, x, y in pair[name]:
                if tet >= t or tets[tet].ideal_vertex is None:
                    raise TriangulationError(f"curve side {tet}:{x}{y}: tetrahedron has no ideal vertex")
                loop.append((tet, tets[tet].ideal_vertex, x, y))
            converted.append(loop)
        loops[cusp] = tuple(converted)

    initial = None
    if angles:
        if sorted(angles) != list(range(t)):
            raise TriangulationError("angles must be given for every tetrahedron")
        initial = np.array([angles[i] for i in range(t)])
    tri = Triangulation(tets, curves=loops, angles=initial)
    for cusp in loops:
        if cusp >= tri.k:
            raise TriangulationError(f"curve given for missing cusp {cusp}")
    return tri


def read(path) -> Triangulation:
    return parse(Path(path).read_text())


def _side_token(side) -> str:
    tet, _, x, y = side
    return f"{tet}:{x}{y}"


def dumps(tri: Triangulation, angles=None, curves: bool = False) -> str:
    """Serialize a triangulation (optionally with curves and angles)."""
    lines = [f"format ptt {FORMAT_VERSION}"]
    for i, tet in enumerate(tri.tets):
        flags = "".join("1" if b else "0" for b in tet.ideal)
        glue = "  ".join(f"{j} {''.join(map(str, perm))}" for j, perm in tet.gluings)
        lines.append(f"tet {i} {flags}  {glue}")
    if curves:
        for cusp in tri.cusps:
            lines.append(f"curve {cusp.index} mu " + " ".join(map(_side_token, cusp.meridian)))
            lines.append(f"curve {cusp.index} lambda " + " ".join(map(_side_token, cusp.longitude)))
    if angles is not None:
        angles = np.asarray(angles, float).reshape(tri.t, 6)
        for i, row in enumerate(angles):
            lines.append(f"angles {i} " + " ".join(f"{a:.17g}" for a in row))
    return "\n".join(lines) + "\n"


_ANGLE_LINE = re.compile(r"angle\[(\d+)\]\[([0-3])([0-3])\]\s*=\s*(\S+)")


def read_angles(text: str, t: int) -> np.ndarray:
    """
    Angles from either ``angles`` records or report lines
    ``angle[<tet>][<ab>] = value``; returns shape ``(t, 6)``.
    """
    out = np.full((t, 6), np.nan)
    edge_pos = {e: k for k, e in enumerate(EDGES)}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        m = _ANGLE_LINE.fullmatch(line)
        if m:
            tet, a, b = int(m[1]), int(m[2]), int(m[3])
            if tet >= t or (min(a, b), max(a, b)) not in edge_pos:
                raise FormatError(lineno, f"bad angle key in {line!r}")
            out[tet, edge_pos[(min(a, b), max(a, b))]] = float(m[4])
        elif line.startswith("angles "):
            words = line.split()
            if len(words) != 8 or int(words[1]) >= t:
                raise FormatError(lineno, "bad angles record")
            out[int(words[1])] = [float(w) for w in words[2:]]
    if np.isnan(out).any():
        raise FormatError(0, "angle file does not cover every tetrahedron edge")
    return out
