# randfem - Realizations
# One randomized finite element solution per (seed, replication)

"""
Single-realization pipeline.

A realization draws its points, assembles the stiffness matrix and the load
vector for the chosen estimator, and solves the system. Draw sets come from
streams derived from (seed, replication, purpose), so the stiffness draw and
the load draw are independent and any realization can be recomputed alone.
"""

import time
from dataclasses import dataclass, field
from enum import Enum

import structlog

from randfem.engine.assembly.assemble import (
    assemble_load_barycentric,
    assemble_load_is,
    assemble_load_mc,
    assemble_mass,
    assemble_stiffness_exact,
    assemble_stiffness_mc,
)
from randfem.engine.assembly.coefficients import CoefficientField, unit_sigma
from randfem.engine.assembly.matrices import FemCoefficients, SparseSpdMatrix
from randfem.engine.mesh.triangle_mesh import TriangleMesh
from randfem.engine.quadrature.rules import Integrand
from randfem.engine.sampling.draws import draw_hat, draw_uniform
from randfem.engine.sampling.streams import RngStream, StreamPurpose
from randfem.engine.solver.cg_solver import SolveReport, solve_spd
from randfem.engine.utils.errors import ParameterError

logger = structlog.get_logger(__name__)


class Estimator(str, Enum):
    """Load-vector estimator of a realization."""

    MC = "mc"
    IS = "is"
    BARYCENTRIC = "barycentric"


@dataclass(frozen=True, eq=False)
class RealizationContext:
    """A mesh with its exact (sigma = 1) stiffness and mass matrices."""

    mesh: TriangleMesh
    stiffness: SparseSpdMatrix
    mass: SparseSpdMatrix

    @classmethod
    def build(cls, mesh: TriangleMesh) -> "RealizationContext":
        return cls(
            mesh=mesh,
            stiffness=assemble_stiffness_exact(mesh),
            mass=assemble_mass(mesh),
        )


@dataclass(frozen=True, eq=False)
class RealizationResult:
    """
    Outcome of one realization.

    ``load_seconds`` covers drawing the load points and assembling the load
    vector, nothing else.
    """

    coefficients: FemCoefficients
    report: SolveReport
    load_seconds: float
    estimator: Estimator
    seed: int
    replication: int
    stream_ids: tuple[int, ...] = field(default=())


def run_realization(
    mesh: TriangleMesh,
    sigma: CoefficientField | None,
    f: Integrand,
    estimator: Estimator | str,
    seed: int,
    replication: int = 0,
    context: RealizationContext | None = None,
    tol: float | None = None,
) -> RealizationResult:
    """
    Assemble and solve one realization.

    The importance-sampling and barycentric estimators pair their load with
    the exact stiffness and so require sigma = 1. A unit sigma also makes the
    Monte Carlo stiffness coincide with the exact one, so no stiffness draw
    is made in that case.
    """
    estimator = Estimator(estimator)
    sigma = sigma or unit_sigma()
    if estimator is not Estimator.MC and not sigma.is_unit:
        raise ParameterError(
            f"{estimator.value.upper()} requires sigma=unit, got {sigma.name}"
        )
    if context is None:
        context = RealizationContext.build(mesh)
    elif context.mesh is not mesh:
        raise ParameterError("realization context was built for another mesh")

    stream_ids: list[int] = []
    if sigma.is_unit:
        stiffness = context.stiffness
    else:
        stiffness_stream = RngStream.derive(seed, replication, StreamPurpose.STIFFNESS)
        stream_ids.append(stiffness_stream.stream_id)
        stiffness_draw = draw_uniform(mesh, stiffness_stream)
        stiffness = assemble_stiffness_mc(mesh, sigma, stiffness_draw)

    started = time.perf_counter()
    if estimator is Estimator.MC:
        load_stream = RngStream.derive(seed, replication, StreamPurpose.LOAD)
        load = assemble_load_mc(mesh, f, draw_uniform(mesh, load_stream))
        stream_ids.append(load_stream.stream_id)
    elif estimator is Estimator.IS:
        hat_stream = RngStream.derive(seed, replication, StreamPurpose.HAT)
        load = assemble_load_is(mesh, f, draw_hat(mesh, hat_stream))
        stream_ids.append(hat_stream.stream_id)
    else:
        load = assemble_load_barycentric(mesh, f)
    load_seconds = time.perf_counter() - started

    coefficients, report = solve_spd(stiffness, load, tol=tol)
    return RealizationResult(
        coefficients=coefficients,
        report=report,
        load_seconds=load_seconds,
        estimator=estimator,
        seed=seed,
        replication=replication,
        stream_ids=tuple(stream_ids),
    )
