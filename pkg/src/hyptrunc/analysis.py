"""
Dehn filling coefficients, the limiting cusp ratio ``tau``, and finite
difference experiments on how compact pieces move near the complete
structure.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .equations import ReducedSystem
from .geometry import DomainError, boundary_edge_length, internal_edge_length
from .holonomy import eval_uv
from .solver import (
    SolveError,
    TangentBasis,
    _run,
    _system,
    solve_complete,
    solve_curve,
    solve_deformed,
    tangent_basis,
)
from .triangulation import EDGES

__all__ = [
    "INFINITY",
    "FillingCoefficients",
    "coefficients_from_uv",
    "dehn_coefficients",
    "TauEstimate",
    "tau_estimate",
    "coefficient_box",
    "FillingSearch",
    "fill",
    "filling_search",
    "RigidityEntry",
    "RigidityReport",
    "rigidity_check",
]

#: marker for an unfilled (complete) cusp
INFINITY = "inf"
U_ZERO = 1e-10
SINGULAR_TOL = 1e-12
#: curve points for the rigidity experiment are polished well below the
#: changes they measure (about 1e-12 at h/2 = 5e-3)
CURVE_TOL = 1e-13
TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class FillingCoefficients:
    """
    Per cusp either :data:`INFINITY` or a real pair ``(p, q)`` with
    ``p u + q v = 2 pi i``.
    """

    values: tuple

    @property
    def is_integral_coprime(self) -> bool:
        for val in self.values:
            if val == INFINITY:
                continue
            r = [round(c) for c in val]
            if any(abs(c - n) > 1e-6 for c, n in zip(val, r)) or math.gcd(*r) != 1:
                return False
        return True

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, j):
        return self.values[j]


def coefficients_from_uv(u, v) -> FillingCoefficients:
    """
    Solve ``[Re u, Re v; Im u, Im v] (p, q)^T = (0, 2 pi)^T`` per cusp.

    Raises ``ValueError`` when ``u`` and ``v`` are real-proportional.
    """
    values = []
    for j, (uj, vj) in enumerate(zip(np.atleast_1d(u), np.atleast_1d(v))):
        if abs(uj) <= U_ZERO:
            values.append(INFINITY)
            continue
        M = np.array([[uj.real, vj.real], [uj.imag, vj.imag]])
        if abs(np.linalg.det(M)) <= SINGULAR_TOL * max(abs(uj) * abs(vj), 1e-300):
            raise ValueError(f"cusp {j}: u and v are real-proportional, no filling coefficients")
        p, q = np.linalg.solve(M, [0.0, 2 * math.pi])
        values.append((float(p), float(q)))
    return FillingCoefficients(tuple(values))


def dehn_coefficients(x, tri) -> FillingCoefficients:
    """Filling coefficients of the structure with free coordinates ``x``."""
    system = _system(tri)
    hol = eval_uv(system.chart.angles(x), system.tri)
    return coefficients_from_uv(hol.u, hol.v)


@dataclass
class TauEstimate:
    """
    ``tau`` is the Richardson limit of ``ratios`` (the values of ``v/u`` at
    the targets ``u``); ``contraction`` holds the ratios of
    successive differences and ``cauchy`` whether the last difference is
    below ``1e-4``.
    """

    tau: complex
    u: np.ndarray
    ratios: np.ndarray
    differences: np.ndarray
    contraction: np.ndarray
    cauchy: bool


def _richardson(values):
    """Limit of a sequence with errors in powers of a parameter halved each step."""
    table = list(values)
    order = 1
    while len(table) > 1:
        f = 2.0**order
        table = [(f * b - a) / (f - 1) for a, b in zip(table, table[1:])]
        order += 1
    return table[0]


def tau_estimate(tri, cusp: int = 0, x0=None, exponents=range(3, 9)) -> TauEstimate:
    """
    Limit of ``v_j / u_j`` along the solutions with ``u = 2^-m i e_j``.

    The sequence is produced by continuation from the complete point ``x0``
    (solved when omitted).  Along a ray ``v/u`` is a power series in
    ``|u|``, which halves at each step, so a full Richardson table removes
    the error terms one order at a time.
    """
    system = _system(tri)
    if x0 is None:
        x0 = solve_complete(system).x
    k = system.tri.k
    x = np.asarray(x0, float)
    targets, ratios = [], []
    for m in exponents:
        u_target = np.zeros(k, complex)
        u_target[cusp] = 1j * 2.0**-m
        # walk from the previous point in steps of at most 0.1
        start_u = eval_uv(system.chart.angles(x), system.tri).u
        n = max(1, math.ceil(np.linalg.norm(u_target - start_u) / 0.1))
        for s in np.linspace(0, 1, n + 1)[1:]:
            x = solve_deformed(system, start_u + s * (u_target - start_u), x).x
        hol = eval_uv(system.chart.angles(x), system.tri)
        targets.append(hol.u[cusp])
        ratios.append(hol.v[cusp] / hol.u[cusp])
    ratios = np.array(ratios)
    diffs = np.abs(np.diff(ratios))
    contraction = diffs[:-1] / diffs[1:] if diffs.size > 1 else np.zeros(0)
    tau = _richardson(ratios)
    cauchy = bool(diffs.size and diffs[-1] < 1e-4)
    if not cauchy:
        warnings.warn("v/u sequence is not Cauchy at 1e-4", stacklevel=2)
    return TauEstimate(complex(tau), np.array(targets), ratios, diffs, contraction, cauchy)


def _normalize_target(coeffs, k):
    if coeffs == INFINITY or coeffs is None:
        return (INFINITY,) * k
    coeffs = tuple(coeffs)
    if k == 1 and len(coeffs) == 2 and all(isinstance(c, (int, np.integer)) for c in coeffs):
        coeffs = (coeffs,)
    if len(coeffs) != k:
        raise ValueError(f"expected coefficients for {k} cusps, got {len(coeffs)}")
    out = []
    for c in coeffs:
        if c == INFINITY or c is None:
            out.append(INFINITY)
        else:
            p, q = c
            out.append((int(p), int(q)))
    return tuple(out)


def _filling_map(system: ReducedSystem, coeffs, s: float):
    """``x -> (F, A, per cusp u or p u + q v - s 2 pi i)``."""

    def fun(x):
        theta = system.angles(x)
        hol = eval_uv(theta, system.tri)
        tail = []
        for j, c in enumerate(coeffs):
            z = hol.u[j] if c == INFINITY else c[0] * hol.u[j] + c[1] * hol.v[j] - s * TWO_PI_I
            tail.extend((z.real, z.imag))
        return np.concatenate([system.F(theta), system.A(theta), tail])

    return fun


def fill(tri, coeffs, x0=None, first_step: float = 0.05, min_step: float = 1e-4):
    """
    Solved point with filling coefficients ``coeffs`` (a per-cusp sequence of
    ``(p, q)`` or :data:`INFINITY`).

    Continuation in ``s`` from 0 to 1 on ``p u + q v = s 2 pi i`` starting at
    the complete point; the step grows after successes and is halved after
    failures.
    """
    system = _system(tri)
    coeffs = _normalize_target(coeffs, system.tri.k)
    if x0 is None:
        x0 = solve_complete(system).x
    x = np.asarray(x0, float)
    if all(c == INFINITY for c in coeffs):
        return solve_complete(system, x)
    s, ds = 0.0, first_step
    report = None
    while s < 1.0:
        trial = min(1.0, s + ds)
        fun = _filling_map(system, coeffs, trial)
        try:
            report = _run(system, fun, x, "fill", coeffs, 1e-11, 30)
        except (SolveError, DomainError) as exc:
            ds /= 2
            if ds < min_step:
                raise SolveError(f"fill {coeffs}: continuation stalled at s = {s:.4g}", getattr(exc, "report", report)) from exc
            continue
        s, x = trial, report.x
        ds *= 1.5
    return report


def coefficient_box(p_max: int, q_max: int, min_norm: float = 0.0):
    """Coprime ``(p, q)`` with ``|p| <= p_max``, ``0 <= q <= q_max`` (one of each ``+-`` pair)."""
    out = []
    for p, q in product(range(-p_max, p_max + 1), range(0, q_max + 1)):
        if q == 0 and p <= 0:
            continue
        if math.gcd(p, q) == 1 and math.hypot(p, q) >= min_norm:
            out.append((p, q))
    return out


@dataclass
class FillingSearch:
    """Solved targets, per-target failures, and targets rejected up front."""

    solved: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    rejected: list = field(default_factory=list)


def filling_search(tri, targets, x0=None, tol: float = 1e-6) -> FillingSearch:
    """
    Solve each target (per-cusp coefficients) by :func:`fill` and keep those
    whose coefficients round-trip within ``tol``.

    Targets with a non-coprime pair are rejected before solving; solver
    failures are recorded and do not stop the batch.
    """
    system = _system(tri)
    k = system.tri.k
    if x0 is None:
        x0 = solve_complete(system).x
    out = FillingSearch()
    for target in targets:
        coeffs = _normalize_target(target, k)
        bad = [c for c in coeffs if c != INFINITY and math.gcd(*c) != 1]
        if bad:
            out.rejected.append((coeffs, f"not coprime: {bad[0]}"))
            continue
        try:
            report = fill(system, coeffs, x0)
        except (SolveError, DomainError) as exc:
            out.failures.append((coeffs, str(exc)))
            continue
        got = dehn_coefficients(report.x, system)
        err = 0.0
        for want, have in zip(coeffs, got):
            if (want == INFINITY) != (have == INFINITY):
                err = math.inf
            elif want != INFINITY:
                err = max(err, abs(want[0] - have[0]), abs(want[1] - have[1]))
        if err <= tol:
            out.solved.append((coeffs, report.x))
        else:
            out.failures.append((coeffs, f"coefficients round-trip off by {err:.3g}"))
    return out


@dataclass(frozen=True)
class RigidityEntry:
    """
    One quantity along one tangent direction.

    ``derivative`` is the Richardson central difference from ``s = +-h,
    +-h/2``; ``ratio`` is ``|g(h) - g(0)| / |g(h/2) - g(0)|`` and ``order``
    its base-2 logarithm (2 for quadratic vanishing).
    """

    kind: str
    label: str
    direction: int
    value: float
    derivative: float
    ratio: float
    order: float


@dataclass
class RigidityReport:
    h: float
    entries: list
    note: str = (
        "boundary_edge rows are lengths of boundary edges on compact hexagons, "
        "a surrogate for the differential of the boundary structure"
    )

    def of_kind(self, kind):
        return [e for e in self.entries if e.kind == kind]

    @property
    def max_derivative(self) -> float:
        return max((abs(e.derivative) for e in self.entries), default=0.0)


def _compact_quantities(system: ReducedSystem):
    """Labelled functions of the angle array for every monitored quantity."""
    tri = system.tri
    ideal = tri.ideal_vertices
    out = []
    for cls in tri.edge_classes:
        if cls.compact:
            i, kk = cls.angle_slots()[0]
            a, b = EDGES[kk]
            out.append(
                ("edge_length", f"edge {cls.index}",
                 lambda th, i=i, a=a, b=b: internal_edge_length(th[i], a, b, ideal[i]))
            )
    for i, v in enumerate(ideal):
        if v is None:
            for kk, (a, b) in enumerate(EDGES):
                out.append(("angle", f"angle[{i}][{a}{b}]", lambda th, i=i, kk=kk: th[i, kk]))
    seen = set()
    for i, v in enumerate(ideal):
        for f in range(4):
            if v is not None and f != v:
                continue
            if (i, f) in seen:
                continue
            j, perm = tri.tets[i].gluings[f]
            seen.update({(i, f), (j, perm[f])})
            face = [w for w in range(4) if w != f]
            for w in face:
                a, b = (x for x in face if x != w)
                out.append(
                    ("boundary_edge", f"boundary[{i}][{f}][{w}]",
                     lambda th, i=i, w=w, a=a, b=b: boundary_edge_length(th[i], w, a, b))
                )
    return out


def rigidity_check(tri, x0=None, basis: TangentBasis | None = None, h: float = 1e-2) -> RigidityReport:
    """
    Derivatives at the complete point of compact edge lengths, angles of
    compact tetrahedra and boundary edges of compact hexagons, along curves
    of solutions tangent to each basis direction.

    ``x0`` should be solved to near machine precision; by default it is
    solved here with the curve tolerance.
    """
    system = _system(tri)
    if system.tri.k == 0:
        raise ValueError("no tangent directions: the triangulation has no cusps")
    if x0 is None:
        x0 = solve_complete(system, tol=CURVE_TOL).x
    x0 = np.asarray(x0, float)
    if basis is None:
        basis = tangent_basis(system, x0)
    if basis.dimension == 0:
        raise ValueError("no tangent directions")
    quantities = _compact_quantities(system)
    theta0 = system.chart.angles(x0)
    base = [g(theta0) for _, _, g in quantities]
    entries = []
    for d in range(basis.dimension):
        e = np.zeros(basis.dimension)
        e[d] = 1.0
        values = {}
        for sign in (1, -1):
            x = x0
            for s in (h / 2, h):
                x = solve_curve(system, x0, basis, e, sign * s, x, tol=CURVE_TOL).x
                theta = system.chart.angles(x)
                values[sign * s] = [g(theta) for _, _, g in quantities]
        for n, (kind, label, _) in enumerate(quantities):
            g = {s: vals[n] for s, vals in values.items()}
            d_h = (g[h] - g[-h]) / (2 * h)
            d_h2 = (g[h / 2] - g[-h / 2]) / h
            deriv = (4 * d_h2 - d_h) / 3
            num, den = abs(g[h] - base[n]), abs(g[h / 2] - base[n])
            ratio = num / den if den > 0 else math.inf
            order = math.log2(ratio) if 0 < ratio < math.inf else math.nan
            entries.append(RigidityEntry(kind, label, d, base[n], deriv, ratio, order))
    return RigidityReport(h, entries)
