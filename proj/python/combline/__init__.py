"""Geometric distances and bandlimited approximation on closed subsets of R.

The heavy lifting lives in the compiled ``_core`` module; this package just
re-exports its public surface.
"""

from ._core import (
    Approximant,
    CheckFailure,
    GeometryReport,
    Interval,
    LevinMap,
    RealLineSet,
    StructuralError,
    kernel_approx,
    minimax_approx,
    omega_star,
    solve_map,
    tau,
    validate_geometry,
)

__all__ = [
    "Approximant",
    "CheckFailure",
    "GeometryReport",
    "Interval",
    "LevinMap",
    "RealLineSet",
    "StructuralError",
    "kernel_approx",
    "minimax_approx",
    "omega_star",
    "solve_map",
    "tau",
    "validate_geometry",
]
