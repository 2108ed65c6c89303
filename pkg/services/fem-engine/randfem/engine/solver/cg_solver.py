# randfem - Conjugate Gradient Solver
# Unpreconditioned CG for sparse SPD systems

"""
Conjugate gradient solver.

Inner products use numpy's pairwise summation instead of BLAS so results do
not depend on the BLAS build or its thread count. When the recursive
residual meets the tolerance the true residual is recomputed; if it misses,
the iteration restarts from the true residual.
"""

import numpy as np
import structlog
from pydantic import BaseModel, Field

from randfem.engine.assembly.matrices import FemCoefficients, SparseSpdMatrix
from randfem.engine.utils.config import get_settings
from randfem.engine.utils.errors import ParameterError

logger = structlog.get_logger(__name__)


class SolveReport(BaseModel):
    """Outcome of one CG solve; ``converged`` implies residual <= tol."""

    iterations: int = Field(..., ge=0, description="CG iterations performed")
    relative_residual: float = Field(..., description="||b - Ax|| / ||b|| at exit")
    converged: bool = Field(..., description="Tolerance met within max_iter")


def _dot(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.sum(a * b))


def solve_spd(
    A: SparseSpdMatrix,
    b: FemCoefficients,
    tol: float | None = None,
    max_iter: int | None = None,
) -> tuple[FemCoefficients, SolveReport]:
    """
    Solve A x = b by conjugate gradients from x = 0.

    Non-convergence is reported, not raised. A non-finite right-hand side
    yields a NaN solution with a diagnostic.
    """
    solver = get_settings().solver
    tol = solver.tol if tol is None else tol
    max_iter = solver.max_iter_factor * A.dimension if max_iter is None else max_iter
    if not 0.0 < tol < 1.0:
        raise ParameterError(f"tol must lie in (0, 1), got {tol}")
    if max_iter < 1:
        raise ParameterError(f"max_iter must be positive, got {max_iter}")
    if len(b) != A.dimension:
        raise ParameterError(
            f"right-hand side has length {len(b)}, matrix dimension is {A.dimension}"
        )

    rhs = b.values
    if not b.is_finite:
        logger.error(
            "Non-finite right-hand side",
            non_finite=int((~np.isfinite(rhs)).sum()),
            dimension=A.dimension,
        )
        nan = np.full(A.dimension, np.nan)
        return FemCoefficients(nan), SolveReport(
            iterations=0, relative_residual=float("nan"), converged=False
        )

    b_norm = np.sqrt(_dot(rhs, rhs))
    x = np.zeros(A.dimension)
    if b_norm == 0.0:
        report = SolveReport(iterations=0, relative_residual=0.0, converged=True)
        return FemCoefficients(x), report

    threshold = (tol * b_norm) ** 2
    r = rhs.copy()
    d = r.copy()
    rr = _dot(r, r)
    iterations = 0
    while iterations < max_iter:
        Ad = A.matvec(d)
        alpha = rr / _dot(d, Ad)
        x += alpha * d
        r -= alpha * Ad
        iterations += 1
        rr_next = _dot(r, r)
        if rr_next <= threshold:
            r = rhs - A.matvec(x)
            rr_next = _dot(r, r)
            if rr_next <= threshold:
                rr = rr_next
                break
            d = r.copy()
            rr = rr_next
            continue
        d = r + (rr_next / rr) * d
        rr = rr_next

    residual = rhs - A.matvec(x)
    relative = float(np.sqrt(_dot(residual, residual)) / b_norm)
    report = SolveReport(
        iterations=iterations, relative_residual=relative, converged=relative <= tol
    )
    if not report.converged:
        logger.warning(
            "CG did not converge",
            iterations=iterations,
            relative_residual=relative,
            tol=tol,
        )
    return FemCoefficients(x), report
