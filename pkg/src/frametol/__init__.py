"""Perturbation tolerances for exponential frames on [-pi, pi]^d."""

from frametol.tolerance import (
    ConvergenceError,
    DomainError,
    FrameRatio,
    ToleranceReport,
    asymptotic_ratio,
    correction_term,
    omega_d,
    solve_x_d,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "FrameRatio",
    "ToleranceReport",
    "asymptotic_ratio",
    "correction_term",
    "omega_d",
    "solve_x_d",
]
