"""Sparse stiffness, mass and load assembly for P1 elements."""

from randfem.engine.assembly.assemble import (
    assemble_load_barycentric,
    assemble_load_is,
    assemble_load_mc,
    assemble_mass,
    assemble_stiffness_exact,
    assemble_stiffness_mc,
)
from randfem.engine.assembly.coefficients import (
    CoefficientField,
    SigmaKind,
    constant_sigma,
    get_sigma,
    sine_sigma,
    unit_sigma,
)
from randfem.engine.assembly.matrices import FemCoefficients, SparseSpdMatrix

__all__ = [
    "CoefficientField",
    "FemCoefficients",
    "SigmaKind",
    "SparseSpdMatrix",
    "assemble_load_barycentric",
    "assemble_load_is",
    "assemble_load_mc",
    "assemble_mass",
    "assemble_stiffness_exact",
    "assemble_stiffness_mc",
    "constant_sigma",
    "get_sigma",
    "sine_sigma",
    "unit_sigma",
]
