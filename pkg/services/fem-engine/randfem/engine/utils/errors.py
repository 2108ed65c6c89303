# randfem - Error Types
# Exception hierarchy shared by the engine and the CLI

"""
Exception hierarchy for randfem.

Every error raised on purpose by the engine derives from :class:`RandFemError`.
The CLI maps :class:`ParameterError` (and its :class:`ConfigError` subclass) to
the usage exit status and every other :class:`RandFemError` to the numeric
failure exit status.
"""


class RandFemError(Exception):
    """Base class for all randfem errors."""


class ParameterError(RandFemError, ValueError):
    """An argument is outside its documented range or has the wrong shape."""


class ConfigError(ParameterError):
    """A run configuration key is unknown, malformed or violates an invariant."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class MeshValidityError(RandFemError):
    """The triangulation violates an admissibility requirement."""

    def __init__(self, message: str, failures: list[str] | None = None):
        self.failures = failures or [message]
        super().__init__(message)


class DataError(RandFemError):
    """Input data (coefficient field, load values) violates its contract."""


class SingularIntegrandError(RandFemError):
    """An integrand stayed non-finite at a sampled point after the single resample."""

    def __init__(self, message: str, triangle: int | None = None):
        self.triangle = triangle
        super().__init__(message)


class MatrixValidityError(RandFemError):
    """A matrix expected to be positive semidefinite produced a negative form."""


class SamplingError(RandFemError):
    """Internal sampler failure, e.g. the rejection loop hit its iteration cap."""
