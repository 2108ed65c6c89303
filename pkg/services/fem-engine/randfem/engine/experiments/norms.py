# randfem - Discrete Norms
# H1 seminorm, L2 norm and empirical-variance errors of P1 functions

"""
Norms of P1 functions through their Gram matrices.

|v_h|_{H^1}^2 = v^T A v with the sigma = 1 stiffness matrix and
||v_h||_{L^2}^2 = v^T M v with the mass matrix. Since the randomized
solutions are unbiased for the Galerkin solution, the square root of their
empirical variance in either norm estimates the root-mean-square error.
"""

from enum import Enum
from typing import Sequence

import numpy as np
import structlog

from randfem.engine.assembly.matrices import FemCoefficients, SparseSpdMatrix
from randfem.engine.solver.realization import RealizationContext
from randfem.engine.utils.errors import MatrixValidityError, ParameterError

logger = structlog.get_logger(__name__)

NEGATIVE_FORM_TOL = 1e-12


class NormKind(str, Enum):
    H1 = "h1"
    L2 = "l2"


def _clamped_root(value: float, label: str) -> float:
    if value < -NEGATIVE_FORM_TOL:
        raise MatrixValidityError(f"{label} quadratic form is negative: {value:.3e}")
    return float(np.sqrt(max(value, 0.0)))


def h1_seminorm(A_exact: SparseSpdMatrix, v: FemCoefficients) -> float:
    """sqrt(v^T A v) for the sigma = 1 stiffness matrix."""
    return _clamped_root(A_exact.quadratic_form(v), "stiffness")


def l2_norm(M_mass: SparseSpdMatrix, v: FemCoefficients) -> float:
    """sqrt(v^T M v) for the mass matrix."""
    return _clamped_root(M_mass.quadratic_form(v), "mass")


def _gram(matrices: RealizationContext, norm: NormKind | str) -> SparseSpdMatrix:
    return matrices.stiffness if NormKind(norm) is NormKind.H1 else matrices.mass


def empirical_error(
    samples: Sequence[FemCoefficients] | np.ndarray,
    norm: NormKind | str,
    matrices: RealizationContext,
) -> float:
    """sqrt(sum_i |u_i - mean|^2 / (M - 1)) in the chosen norm."""
    stack = (
        np.asarray(samples, dtype=float)
        if isinstance(samples, np.ndarray)
        else np.stack([s.values for s in samples])
    )
    if stack.ndim != 2 or stack.shape[0] < 2:
        raise ParameterError(
            f"empirical error needs at least 2 samples, got {len(stack)}"
        )
    gram = _gram(matrices, norm)
    deviations = stack - stack.mean(axis=0)
    forms = np.sum(deviations.T * (gram.csr @ deviations.T), axis=0)
    variance = float(forms.sum()) / (stack.shape[0] - 1)
    return _clamped_root(variance, NormKind(norm).value)


class ErrorAccumulator:
    """
    Streaming empirical error in both norms (Welford updates).

    Samples must be added in a fixed order for reproducible bits; memory
    stays O(N_h) however many replications are added.
    """

    def __init__(self, matrices: RealizationContext):
        self.matrices = matrices
        self.count = 0
        self.mean = np.zeros(matrices.stiffness.dimension)
        self._sums = {NormKind.H1: 0.0, NormKind.L2: 0.0}

    def add(self, sample: FemCoefficients) -> None:
        self.count += 1
        delta = sample.values - self.mean
        self.mean = self.mean + delta / self.count
        after = sample.values - self.mean
        for kind in NormKind:
            gram = _gram(self.matrices, kind).csr
            self._sums[kind] += float(np.sum(delta * (gram @ after)))

    def error(self, norm: NormKind | str) -> float:
        if self.count < 2:
            raise ParameterError(
                f"empirical error needs at least 2 samples, got {self.count}"
            )
        kind = NormKind(norm)
        return _clamped_root(self._sums[kind] / (self.count - 1), kind.value)
