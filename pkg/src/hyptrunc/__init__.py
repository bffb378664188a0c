"""
Hyperbolic structures with geodesic boundary and torus cusps on 3-manifolds
triangulated by partially truncated tetrahedra.

The main entry points are :func:`parse` / :func:`read` for triangulation
files, :func:`build` for the reduced consistency system,
:func:`solve_complete` and friends in :mod:`hyptrunc.solver`, and the
filling and rigidity experiments in :mod:`hyptrunc.analysis`.
"""

from .analysis import (
    INFINITY,
    coefficients_from_uv,
    dehn_coefficients,
    fill,
    filling_search,
    rigidity_check,
    tau_estimate,
)
from .census import enumerate_gluings
from .equations import build, default_angles, eval_FA, jacobian
from .geometry import DomainError
from .holonomy import BranchError, eval_uv, loop_holonomy
from .io import FormatError, dumps, parse, read
from .peripheral import peripheral_basis
from .solver import (
    SolveError,
    continue_deformed,
    solve_complete,
    solve_cone,
    solve_deformed,
    tangent_basis,
)
from .triangulation import TetSpec, Triangulation, TriangulationError

__version__ = "0.1.0"

__all__ = [
    "INFINITY",
    "BranchError",
    "DomainError",
    "FormatError",
    "SolveError",
    "TetSpec",
    "Triangulation",
    "TriangulationError",
    "build",
    "coefficients_from_uv",
    "continue_deformed",
    "default_angles",
    "dehn_coefficients",
    "dumps",
    "enumerate_gluings",
    "eval_FA",
    "eval_uv",
    "fill",
    "filling_search",
    "jacobian",
    "loop_holonomy",
    "parse",
    "peripheral_basis",
    "read",
    "rigidity_check",
    "solve_complete",
    "solve_cone",
    "solve_deformed",
    "tangent_basis",
    "tau_estimate",
]
