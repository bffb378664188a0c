"""
Damped Newton solves for complete, deformed, cone and filled structures, and
numerical tangent spaces at solved points.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .equations import ReducedSystem, build, default_angles, eval_FA, jacobian, jacobian_FA
from .geometry import DomainError
from .holonomy import eval_uv

__all__ = [
    "SolveError",
    "SolveReport",
    "TangentBasis",
    "newton",
    "complete_map",
    "solve_complete",
    "solve_deformed",
    "continue_deformed",
    "solve_cone",
    "solve_curve",
    "tangent_basis",
    "u_differential",
]

log = logging.getLogger(__name__)

TOL = 1e-11
MAX_ITER = 100
MAX_HALVINGS = 30
RANK_TOL = 1e-8
RETRIES = 5
RETRY_SCALE = 0.02


class SolveError(RuntimeError):
    """Newton failed; ``report`` holds the best point reached."""

    def __init__(self, message: str, report: "SolveReport"):
        self.report = report
        super().__init__(message)


@dataclass
class SolveReport:
    converged: bool
    x: np.ndarray
    residual: float
    iterations: int
    mode: str
    target: object = None
    sv_G: np.ndarray = field(default_factory=lambda: np.zeros(0))
    sv_FA: np.ndarray = field(default_factory=lambda: np.zeros(0))
    u: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    v: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    history: list = field(default_factory=list)
    seed: int | None = None
    message: str = ""
    system: ReducedSystem | None = field(default=None, repr=False)

    @property
    def angles(self) -> np.ndarray:
        return self.system.chart.angles(self.x)


@dataclass
class TangentBasis:
    """Orthonormal columns spanning the numerical kernel of ``d(F, A)``."""

    vectors: np.ndarray
    singular_values: np.ndarray
    gap_ratio: float

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]


def _system(tri_or_system) -> ReducedSystem:
    if isinstance(tri_or_system, ReducedSystem):
        return tri_or_system
    return build(tri_or_system)[1]


def _uv_vector(theta, tri):
    hol = eval_uv(theta, tri)
    return hol, np.column_stack([hol.u.real, hol.u.imag]).ravel()


def complete_map(system: ReducedSystem, u_target=None):
    """``x -> (F, A, Re u_1, Im u_1, ...) - (0, 0, u_target)``."""
    tri = system.tri
    shift = None
    if u_target is not None:
        u_target = np.asarray(u_target, complex)
        shift = np.column_stack([u_target.real, u_target.imag]).ravel()

    def G(x):
        theta = system.angles(x)
        _, uv = _uv_vector(theta, tri)
        if shift is not None:
            uv = uv - shift
        return np.concatenate([system.F(theta), system.A(theta), uv])

    return G


def newton(fun, x0, tol: float = TOL, max_iter: int = MAX_ITER):
    """
    Newton's method with backtracking on a square map.

    Returns ``(x, residual_inf_norm, iterations, history, converged, message)``.
    The trial step is halved until it stays in the domain and lowers the
    2-norm of the residual.
    """
    x = np.asarray(x0, float).copy()
    r = np.asarray(fun(x))
    history = [float(np.max(np.abs(r), initial=0.0))]
    for it in range(max_iter + 1):
        if history[-1] <= tol:
            return x, history[-1], it, history, True, "converged"
        if it == max_iter:
            break
        try:
            J = jacobian(fun, x)
        except DomainError as exc:
            return x, history[-1], it, history, False, f"Jacobian leaves the domain: {exc}"
        try:
            dx = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            dx = np.linalg.lstsq(J, -r, rcond=None)[0]
        step = 1.0
        norm = np.linalg.norm(r)
        last_error = None
        for _ in range(MAX_HALVINGS + 1):
            trial = x + step * dx
            try:
                rt = np.asarray(fun(trial))
            except DomainError as exc:
                last_error = exc
                step /= 2
                continue
            if np.linalg.norm(rt) < norm:
                break
            step /= 2
        else:
            msg = "no in-domain decreasing step"
            if last_error is not None:
                msg += f" (last domain error: {last_error})"
            return x, history[-1], it, history, False, msg
        x, r = trial, rt
        history.append(float(np.max(np.abs(r))))
    return x, history[-1], max_iter, history, False, f"no convergence in {max_iter} iterations"


def _finish(system, fun, x, res, its, hist, ok, msg, mode, target, seed=None):
    report = SolveReport(
        converged=ok,
        x=x,
        residual=res,
        iterations=its,
        mode=mode,
        target=target,
        history=hist,
        seed=seed,
        message=msg,
        system=system,
    )
    theta = system.chart.angles(x)
    if system.tri.k:
        try:
            hol = eval_uv(theta, system.tri)
            report.u, report.v = hol.u, hol.v
        except DomainError:
            pass
    if ok:
        report.sv_G = np.linalg.svd(jacobian(fun, x), compute_uv=False)
        report.sv_FA = np.linalg.svd(jacobian_FA(system, x), compute_uv=False)
    return report


def _initial(system, init):
    if init is None:
        return system.chart.coords(default_angles(system.tri))
    init = np.asarray(init, float)
    if init.size == 6 * system.tri.t:
        return system.chart.coords(init)
    return init


def _run(system, fun, x0, mode, target, tol, max_iter, retries=0, seed=0):
    x, res, its, hist, ok, msg = newton(fun, x0, tol, max_iter)
    used_seed = None
    best = (res, x, its, hist, msg)
    attempt = 0
    while not ok and attempt < retries:
        used_seed = seed + attempt
        rng = np.random.default_rng(used_seed)
        attempt += 1
        trial = x0 + RETRY_SCALE * rng.standard_normal(x0.size)
        try:
            x, res, its, hist, ok, msg = newton(fun, trial, tol, max_iter)
        except DomainError:
            continue
        log.info("retry %d (seed %d): %s", attempt, used_seed, msg)
        if res < best[0]:
            best = (res, x, its, hist, msg)
    if not ok:
        res, x, its, hist, msg = best
    report = _finish(system, fun, x, res, its, hist, ok, msg, mode, target, used_seed)
    if not ok:
        raise SolveError(f"{mode}: {msg} (residual {res:.3g})", report)
    return report


def solve_complete(tri, init=None, tol=TOL, max_iter=MAX_ITER, seed=0) -> SolveReport:
    """
    Solve ``G = (F, A, u) = 0`` for the complete structure.

    ``init`` may be a free vector or a full ``(t, 6)`` angle array.  On
    failure up to five seeded perturbations of the start are tried.
    """
    system = _system(tri)
    x0 = _initial(system, init)
    fun = complete_map(system)
    return _run(system, fun, x0, "complete", None, tol, max_iter, RETRIES, seed)


def solve_deformed(tri, u_target, x_start, tol=TOL, max_iter=MAX_ITER) -> SolveReport:
    """Solve ``(F, A, u - u_target) = 0`` starting from a nearby solution."""
    system = _system(tri)
    u_target = np.atleast_1d(np.asarray(u_target, complex))
    fun = complete_map(system, u_target)
    x0 = _initial(system, x_start)
    return _run(system, fun, x0, "deformed", u_target, tol, max_iter)


def continue_deformed(tri, u_target, x_start, max_step=0.1, tol=TOL, max_iter=MAX_ITER):
    """
    Reach ``u_target`` from the solution ``x_start`` in straight-line steps of
    ``u`` no longer than ``max_step``.
    """
    system = _system(tri)
    x = _initial(system, x_start)
    u_target = np.atleast_1d(np.asarray(u_target, complex))
    u0 = eval_uv(system.chart.angles(x), system.tri).u
    n = max(1, math.ceil(np.linalg.norm(u_target - u0) / max_step))
    report = None
    for s in np.linspace(0, 1, n + 1)[1:]:
        report = solve_deformed(system, u0 + s * (u_target - u0), x, tol, max_iter)
        x = report.x
    return report


def solve_cone(tri, angle_targets, x_start=None, tol=TOL, max_iter=MAX_ITER) -> SolveReport:
    """Solve ``F = 0`` with prescribed angle sums around the kept edges."""
    system = _system(tri)
    if system.tri.k or system.tri.p:
        raise ValueError("cone structures are only solved on compact triangulations")
    targets = np.atleast_1d(np.asarray(angle_targets, float))
    if targets.size != system.n_A:
        raise ValueError(f"expected {system.n_A} cone angles, got {targets.size}")

    def fun(x):
        theta = system.angles(x)
        return np.concatenate([system.F(theta), system.A(theta) + 2 * math.pi - targets])

    x0 = _initial(system, x_start)
    return _run(system, fun, x0, "cone", targets, tol, max_iter)


def tangent_basis(tri, x_solved, rank_tol: float = RANK_TOL) -> TangentBasis:
    """
    Kernel of ``d(F, A)`` at a solved point from its SVD.

    Singular values below ``rank_tol`` times the largest count as zero, and
    coordinates beyond the number of equations contribute structural zeros.
    ``gap_ratio`` is the smallest retained singular value over the largest
    discarded one, the latter floored at machine precision times the
    largest.
    """
    system = _system(tri)
    J = jacobian_FA(system, x_solved)
    n = J.shape[1]
    _, s, vt = np.linalg.svd(J, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rank_tol * smax))
    null = vt[rank:].T
    floor = np.finfo(float).eps * max(smax, 1.0)
    kept = s[rank - 1] if rank else 0.0
    dropped = max(s[rank] if rank < s.size else 0.0, floor)
    gap = kept / dropped
    if gap < 10:
        warnings.warn(f"ambiguous spectral gap {gap:.3g} at nullity {n - rank}", stacklevel=2)
    return TangentBasis(null, s, gap)


def solve_curve(tri, x0, basis: TangentBasis, coeffs, s: float, x_start=None, tol=TOL, max_iter=MAX_ITER):
    """
    The point of the solution set whose projection to the tangent space at
    ``x0`` is ``s`` times the combination ``coeffs`` of the basis vectors.

    Solves ``(F, A, B^T (x - x0) - s c) = 0``, a square system.
    """
    system = _system(tri)
    x0 = np.asarray(x0, float)
    B = basis.vectors
    target = s * np.asarray(coeffs, float)

    def fun(x):
        return np.concatenate([eval_FA(system, x), B.T @ (x - x0) - target])

    start = x0 + B @ target if x_start is None else np.asarray(x_start, float)
    return _run(system, fun, start, "curve", target, tol, max_iter)


def u_differential(tri, x0, basis: TangentBasis, h: float = 1e-4) -> np.ndarray:
    """
    Central-difference matrix of ``(Re u_1, Im u_1, ...)`` along the tangent
    basis, one column per basis vector.
    """
    system = _system(tri)
    columns = []
    for j in range(basis.dimension):
        e = np.zeros(basis.dimension)
        e[j] = 1.0
        values = []
        for s in (h, -h):
            x = solve_curve(system, x0, basis, e, s).x
            values.append(_uv_vector(system.chart.angles(x), system.tri)[1])
        columns.append((values[0] - values[1]) / (2 * h))
    return np.column_stack(columns)
