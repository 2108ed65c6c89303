# randfem - Coefficient Fields
# Diffusion coefficients sigma with a declared lower bound

"""Diffusion coefficient catalog: ``unit``, ``sine`` and ``constant(c)``."""

from dataclasses import dataclass
from enum import Enum

import numpy as np
import structlog

from randfem.engine.quadrature.rules import Integrand
from randfem.engine.utils.errors import DataError, ParameterError

logger = structlog.get_logger(__name__)


class SigmaKind(str, Enum):
    UNIFORM = "unit"
    SINE = "sine"
    CONSTANT = "constant"


@dataclass(frozen=True)
class CoefficientField:
    """
    A coefficient sigma(x, y) >= sigma_0 > 0.

    Attributes:
        name: Catalog name.
        evaluate: Vectorized sigma(x, y).
        lower_bound: Declared sigma_0.
        constant_value: The value of a constant field, else None.
    """

    name: str
    evaluate: Integrand
    lower_bound: float
    constant_value: float | None = None

    def __post_init__(self) -> None:
        if not self.lower_bound > 0.0:
            raise ParameterError(
                f"sigma lower bound must be positive, got {self.lower_bound}"
            )

    @property
    def is_unit(self) -> bool:
        return self.constant_value == 1.0

    def check_samples(self, values: np.ndarray) -> None:
        """Raise DataError if any sampled value falls below sigma_0."""
        below = np.flatnonzero(values < self.lower_bound)
        if below.size:
            logger.error(
                "Coefficient below its lower bound",
                sigma=self.name,
                lower_bound=self.lower_bound,
                count=int(below.size),
                minimum=float(values[below].min()),
            )
            raise DataError(
                f"sigma '{self.name}' sampled {float(values[below[0]]):.6g} < "
                f"sigma_0 = {self.lower_bound} at triangle {int(below[0])}"
            )


def constant_sigma(value: float) -> CoefficientField:
    if not value > 0.0:
        raise ParameterError(f"constant sigma must be positive, got {value}")
    return CoefficientField(
        name="unit" if value == 1.0 else f"constant({value:g})",
        evaluate=lambda x, y: np.full(np.shape(x), value),
        lower_bound=value,
        constant_value=value,
    )


def unit_sigma() -> CoefficientField:
    return constant_sigma(1.0)


def _sine(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return 1.0 + 0.5 * np.sin(np.pi * x) * np.sin(np.pi * y)


def sine_sigma() -> CoefficientField:
    """1 + sin(pi x) sin(pi y) / 2; at least 1 on the unit square."""
    return CoefficientField(name="sine", evaluate=_sine, lower_bound=1.0)


def get_sigma(kind: SigmaKind | str, value: float = 1.0) -> CoefficientField:
    """Catalog lookup by name."""
    kind = SigmaKind(kind)
    if kind is SigmaKind.UNIFORM:
        return unit_sigma()
    if kind is SigmaKind.SINE:
        return sine_sigma()
    return constant_sigma(value)
