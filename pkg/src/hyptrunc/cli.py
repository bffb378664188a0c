"""
Command-line front end.

Every command reads a triangulation file and prints a plain-text report
whose lines have the form ``key = value``.  Exit status: 0 success, 1 usage
error, 2 validation failure, 3 solver non-convergence, 4 numerical domain
error.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis, solver
from .equations import build
from .geometry import DomainError
from .io import FormatError, parse, read_angles
from .triangulation import EDGES, TriangulationError

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_NO_CONVERGENCE, EXIT_DOMAIN = range(5)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _vector(values) -> str:
    return " ".join(f"{v:.6e}" for v in values)


class Report:
    def __init__(self):
        self.lines = []

    def __setitem__(self, key, value):
        self.lines.append(f"{key} = {value}")

    def comment(self, text):
        self.lines.append(f"# {text}")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _load(args):
    path = Path(args.file)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    tri = parse(raw.decode())
    return tri, hashlib.sha256(raw).hexdigest()


def _header(rep: Report, tri, digest, system):
    rep["input_sha256"] = digest
    for key, val in tri.counts.items():
        rep[key] = val
    rep["dim_W"] = system.chart.dim
    rep["equations_F"] = system.n_F
    rep["equations_A"] = system.n_A
    rep["equations"] = system.n_equations


def _count_line(tri, system) -> str:
    counts = " ".join(f"{k}={v}" for k, v in tri.counts.items())
    n, dim = system.n_equations, system.chart.dim
    if tri.k:
        return f"{counts}; equations {n} = dim W - 2k = {dim} - {2 * tri.k}"
    return f"{counts}; equations {n} = dim W {dim}"


def _init(args, tri, system):
    if getattr(args, "init", None):
        try:
            text = Path(args.init).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.init}: {exc.strerror}") from None
        return system.chart.coords(read_angles(text, tri.t))
    if tri.initial_angles is not None:
        return system.chart.coords(tri.initial_angles)
    return None


def _solution(rep: Report, report, tri):
    rep["mode"] = report.mode
    rep["converged"] = str(report.converged).lower()
    rep["iterations"] = report.iterations
    rep["residual"] = f"{report.residual:.3e}"
    if report.seed is not None:
        rep["retry_seed"] = report.seed
    theta = report.angles
    for i in range(tri.t):
        for kk, (a, b) in enumerate(EDGES):
            rep[f"angle[{i}][{a}{b}]"] = _fmt(theta[i, kk])
    rep["sv_G"] = _vector(report.sv_G)
    rep["sv_FA"] = _vector(report.sv_FA)
    if tri.k:
        for j in range(tri.k):
            rep[f"u[{j}]"] = f"{_fmt(report.u[j].real)} {_fmt(report.u[j].imag)}"
            rep[f"v[{j}]"] = f"{_fmt(report.v[j].real)} {_fmt(report.v[j].imag)}"
        coeffs = analysis.coefficients_from_uv(report.u, report.v)
        for j, c in enumerate(coeffs):
            rep[f"dehn[{j}]"] = c if c == analysis.INFINITY else f"{_fmt(c[0])} {_fmt(c[1])}"


def _complex(token: str) -> complex:
    try:
        return complex(token.replace("i", "j"))
    except ValueError:
        raise UsageError(f"bad complex number {token!r}") from None


def _coeff(token: str):
    if token == "inf":
        return analysis.INFINITY
    try:
        p, q = (int(w) for w in token.split(","))
    except ValueError:
        raise UsageError(f"bad coefficients {token!r}: use 'p,q' or 'inf'") from None
    return (p, q)


def cmd_validate(args, tri, digest, system, rep):
    _header(rep, tri, digest, system)
    rep["valences"] = " ".join(str(e.valence) for e in tri.edge_classes)
    rep["boundary_euler_characteristics"] = " ".join(str(b.euler_characteristic) for b in tri.boundary)
    print(_count_line(tri, system))


def cmd_solve(args, tri, digest, system, rep):
    _header(rep, tri, digest, system)
    report = solver.solve_complete(system, _init(args, tri, system), args.tol, args.max_iter, args.seed)
    _solution(rep, report, tri)


def cmd_deform(args, tri, digest, system, rep):
    if not tri.k:
        raise UsageError("deform needs a cusped triangulation")
    targets = [_complex(w) for w in args.u]
    if len(targets) != tri.k:
        raise UsageError(f"--u needs {tri.k} values")
    _header(rep, tri, digest, system)
    x0 = solver.solve_complete(system, _init(args, tri, system), args.tol, args.max_iter, args.seed).x
    report = solver.continue_deformed(system, targets, x0, tol=args.tol, max_iter=args.max_iter)
    _solution(rep, report, tri)


def cmd_cone(args, tri, digest, system, rep):
    if len(args.angles) != system.n_A:
        raise UsageError(f"--angles needs {system.n_A} values")
    _header(rep, tri, digest, system)
    report = solver.solve_cone(system, args.angles, _init(args, tri, system), args.tol, args.max_iter)
    _solution(rep, report, tri)
    for e, target in zip(system.angle_classes, args.angles):
        rep[f"cone_angle[{e}]"] = _fmt(system.angle_sum(report.angles, e))


def cmd_fill(args, tri, digest, system, rep):
    coeffs = [_coeff(w) for w in args.coeffs]
    if len(coeffs) == 1 and coeffs[0] == analysis.INFINITY:
        coeffs = coeffs * tri.k
    if len(coeffs) != tri.k:
        raise UsageError(f"--coeffs needs {tri.k} values")
    bad = [c for c in coeffs if c != analysis.INFINITY and math.gcd(*c) != 1]
    if bad:
        raise UsageError(f"coefficients {bad[0]} are not coprime")
    _header(rep, tri, digest, system)
    x0 = solver.solve_complete(system, _init(args, tri, system), args.tol, args.max_iter, args.seed).x
    report = analysis.fill(system, coeffs, x0)
    _solution(rep, report, tri)


def cmd_rank(args, tri, digest, system, rep):
    _header(rep, tri, digest, system)
    report = solver.solve_complete(system, _init(args, tri, system), args.tol, args.max_iter, args.seed)
    basis = solver.tangent_basis(system, report.x)
    rep["residual"] = f"{report.residual:.3e}"
    rep["sv_FA"] = _vector(basis.singular_values)
    rep["nullity(d(F,A))"] = basis.dimension
    rep["gap_ratio"] = f"{basis.gap_ratio:.3e}"
    rep["sv_G"] = _vector(report.sv_G)
    rep["min_sv(dG)"] = f"{report.sv_G.min():.6e}"
    rep["min_sv(dG)/max_sv(dG)"] = f"{report.sv_G.min() / report.sv_G.max():.6e}"
    if basis.dimension:
        D = solver.u_differential(system, report.x, basis)
        rep["cond(du|tangent)"] = f"{np.linalg.cond(D):.6e}"


def cmd_rigidity(args, tri, digest, system, rep):
    _header(rep, tri, digest, system)
    x0 = solver.solve_complete(system, _init(args, tri, system), analysis.CURVE_TOL, args.max_iter, args.seed).x
    result = analysis.rigidity_check(system, x0, h=args.h)
    rep["h"] = args.h
    rep.comment(result.note)
    rep.comment("columns: value derivative ratio order")
    for e in result.entries:
        rep[f"{e.kind}:{e.label}:dir{e.direction}"] = (
            f"{_fmt(e.value)} {e.derivative:.3e} {e.ratio:.4f} {e.order:.4f}"
        )
    rep["max_abs_derivative"] = f"{result.max_derivative:.3e}"


COMMANDS = {
    "validate": (cmd_validate, "parse, check invariants and print counts"),
    "solve": (cmd_solve, "solve for the complete structure"),
    "deform": (cmd_deform, "solve with prescribed cusp parameters u"),
    "cone": (cmd_cone, "solve a cone structure with prescribed edge angles"),
    "fill": (cmd_fill, "solve for given Dehn filling coefficients"),
    "rank": (cmd_rank, "singular values and nullity at the complete point"),
    "rigidity": (cmd_rigidity, "derivatives of compact quantities at the complete point"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hyptrunc", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("file", help="triangulation file")
        if name == "validate":
            continue
        p.add_argument("--tol", type=float, default=solver.TOL)
        p.add_argument("--max-iter", type=int, default=solver.MAX_ITER)
        p.add_argument("--init", help="angle file (angles records or a previous report)")
        p.add_argument("--seed", type=int, default=0, help="first seed for perturbed retries")
        if name == "deform":
            p.add_argument("--u", nargs="+", required=True, help="per-cusp complex targets, e.g. 0.01+0.02i")
        elif name == "cone":
            p.add_argument("--angles", nargs="+", type=float, required=True, help="cone angles (radians)")
        elif name == "fill":
            p.add_argument("--coeffs", nargs="+", required=True, help="per-cusp 'p,q' or 'inf'")
        elif name == "rigidity":
            p.add_argument("--h", type=float, default=1e-2)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code
    func = COMMANDS[args.command][0]
    stage = "parse"
    try:
        tri, digest = _load(args)
        stage = "build"
        system = build(tri)[1]
        stage = args.command
        rep = Report()
        func(args, tri, digest, system, rep)
    except UsageError as exc:
        print(f"hyptrunc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, TriangulationError) as exc:
        print(f"hyptrunc: {stage}: invalid triangulation: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except solver.SolveError as exc:
        print(f"hyptrunc: {stage}: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except DomainError as exc:
        print(f"hyptrunc: {stage}: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    sys.stdout.write(rep.text())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
