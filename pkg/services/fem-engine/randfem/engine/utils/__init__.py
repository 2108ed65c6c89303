# randfem - Utils Package
# Configuration, logging and error types

"""
Utility functions and configurations for randfem.
"""

from randfem.engine.utils.errors import (
    ConfigError,
    DataError,
    MatrixValidityError,
    MeshValidityError,
    ParameterError,
    RandFemError,
    SamplingError,
    SingularIntegrandError,
)

__all__ = [
    "ConfigError",
    "DataError",
    "MatrixValidityError",
    "MeshValidityError",
    "ParameterError",
    "RandFemError",
    "SamplingError",
    "SingularIntegrandError",
]
