# randfem - Forcing Terms
# Right-hand sides of the Poisson experiments

"""
Forcing-term catalog.

``f1`` is singular on the diagonal x = y and discontinuous across 2y = x;
``f1eps`` shifts the singular part by machine epsilon so point evaluations on
the diagonal stay finite; ``f2`` is the smooth bubble 8x(1-x)y(1-y). Each
catalog entry carries its closed-form integral over the unit square.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from randfem.engine.quadrature.rules import Integrand
from randfem.engine.utils.errors import ParameterError

SINGULAR_EXPONENT = 0.49
OSCILLATION_AMPLITUDE = 10.0
OSCILLATION_FREQUENCY = 8.0 * np.pi
MACHINE_EPS = float(np.finfo(float).eps)


class ForcingId(str, Enum):
    F1 = "f1"
    F1_EPS = "f1eps"
    F2 = "f2"
    CONST = "const"
    CUSTOM = "custom"


@dataclass(frozen=True)
class ForcingTerm:
    """A forcing term and, when known, its integral over the unit square."""

    id: ForcingId
    evaluate: Integrand
    integral: float | None = None
    name: str = ""

    @property
    def label(self) -> str:
        return self.name or self.id.value

    def __call__(self, x, y):
        return self.evaluate(x, y)


def sgn(x: np.ndarray) -> np.ndarray:
    """-1, 0 or 1; sgn(0) = 0."""
    return np.sign(x)


def _oscillation(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return OSCILLATION_AMPLITUDE * np.sin(OSCILLATION_FREQUENCY * x) * sgn(2.0 * y - x)


def f1(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """|x - y|^-q + 10 sin(8 pi x) sgn(2y - x); +inf on the diagonal."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore"):
        return np.abs(x - y) ** -SINGULAR_EXPONENT + _oscillation(x, y)


def f1_eps(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """f1 with |x - y| replaced by eps + |x - y|."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return (MACHINE_EPS + np.abs(x - y)) ** -SINGULAR_EXPONENT + _oscillation(x, y)


def f2(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """8 x (1 - x) y (1 - y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return 8.0 * x * (1.0 - x) * y * (1.0 - y)


def _oscillation_integral() -> float:
    # integral of sgn(2y - x) over y is 1 - x
    return OSCILLATION_AMPLITUDE / OSCILLATION_FREQUENCY


def _singular_integral(shift: float) -> float:
    """Integral of (shift + |x - y|)^-q over the unit square."""
    q = SINGULAR_EXPONENT
    if shift == 0.0:
        return 2.0 / ((1.0 - q) * (2.0 - q))
    head = ((1.0 + shift) ** (2.0 - q) - shift ** (2.0 - q)) / (2.0 - q)
    return 2.0 / (1.0 - q) * (head - shift ** (1.0 - q))


def constant_forcing(value: float) -> ForcingTerm:
    return ForcingTerm(
        id=ForcingId.CONST,
        evaluate=lambda x, y: np.full(np.shape(x), value),
        integral=float(value),
        name=f"const({value:g})",
    )


def custom_forcing(
    name: str, evaluate: Integrand, integral: float | None = None
) -> ForcingTerm:
    return ForcingTerm(
        id=ForcingId.CUSTOM, evaluate=evaluate, integral=integral, name=name
    )


def get_forcing(forcing: ForcingId | str, value: float = 1.0) -> ForcingTerm:
    """Catalog lookup; ``value`` is the level of the constant forcing."""
    try:
        forcing = ForcingId(forcing)
    except ValueError as exc:
        raise ParameterError(f"unknown forcing {forcing!r}") from exc
    if forcing is ForcingId.F1:
        return ForcingTerm(
            ForcingId.F1, f1, _singular_integral(0.0) + _oscillation_integral()
        )
    if forcing is ForcingId.F1_EPS:
        integral = _singular_integral(MACHINE_EPS) + _oscillation_integral()
        return ForcingTerm(ForcingId.F1_EPS, f1_eps, integral)
    if forcing is ForcingId.F2:
        return ForcingTerm(ForcingId.F2, f2, 2.0 / 9.0)
    if forcing is ForcingId.CONST:
        return constant_forcing(value)
    raise ParameterError("custom forcing terms are built with custom_forcing()")


def reference_integral(forcing: ForcingTerm) -> float:
    if forcing.integral is None or not math.isfinite(forcing.integral):
        raise ParameterError(f"forcing {forcing.label} has no closed-form integral")
    return forcing.integral
