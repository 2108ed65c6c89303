"""Conjugate gradient solves and the single-realization pipeline."""

from randfem.engine.solver.cg_solver import SolveReport, solve_spd
from randfem.engine.solver.realization import (
    Estimator,
    RealizationContext,
    RealizationResult,
    run_realization,
)

__all__ = [
    "Estimator",
    "RealizationContext",
    "RealizationResult",
    "SolveReport",
    "run_realization",
    "solve_spd",
]
