# randfem - Barycentric Baseline
# Errors of the deterministic one-point rule for the singular forcing

"""
Barycentric-rule baseline for the singular forcing term.

Structured meshes always contain triangles whose barycenters lie on the
diagonal x = y, where f1 is infinite. The baseline therefore evaluates the
eps-shifted forcing and compares the resulting Galerkin solution with a
reference solution whose load is the mean of M Monte Carlo loads of f1,
an unbiased estimate of the exact load vector.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Sequence

import numpy as np
import structlog

from randfem.engine.assembly.assemble import assemble_load_barycentric, assemble_load_mc
from randfem.engine.assembly.matrices import FemCoefficients
from randfem.engine.experiments.forcing import ForcingId, ForcingTerm, get_forcing
from randfem.engine.experiments.norms import h1_seminorm, l2_norm
from randfem.engine.experiments.records import ExperimentRecord
from randfem.engine.mesh.structured import build_structured_mesh
from randfem.engine.sampling.draws import draw_uniform
from randfem.engine.sampling.streams import RngStream, StreamPurpose
from randfem.engine.solver.cg_solver import solve_spd
from randfem.engine.solver.realization import Estimator, RealizationContext
from randfem.engine.utils.config import get_settings
from randfem.engine.utils.errors import ParameterError

logger = structlog.get_logger(__name__)

# Full-scale magnitudes of the H1 error, for order-of-magnitude checks.
EXPECTED_H1_MAGNITUDES = {3: 1.4e6, 4: 7.7e5, 5: 4.0e5, 6: 2.1e5, 7: 1.0e5, 8: 5.2e4}


def _reference_forcing(forcing: ForcingTerm) -> ForcingTerm:
    # the eps shift only matters at barycenters on the diagonal
    return get_forcing(ForcingId.F1) if forcing.id is ForcingId.F1_EPS else forcing


def reference_load(
    context: RealizationContext,
    forcing: ForcingTerm,
    replications: int,
    seed: int,
    threads: int = 1,
    cache_dir: Path | None = None,
) -> FemCoefficients:
    """
    Mean of ``replications`` Monte Carlo loads, summed in replication order.

    Cached as ``.npy`` under ``cache_dir`` keyed by (n, M, seed, forcing).
    """
    mesh = context.mesh
    level = int(round(-math.log2(mesh.grid_spacing))) if mesh.grid_spacing else 0
    cache_file = None
    if cache_dir is not None:
        name = f"reference_n{level}_M{replications}_seed{seed}_{forcing.label}.npy"
        cache_file = Path(cache_dir) / name
        if cache_file.exists():
            cached = np.load(cache_file)
            if cached.shape == (mesh.num_interior,):
                logger.debug("Loaded cached reference load", path=str(cache_file))
                return FemCoefficients(cached)
            logger.warning(
                "Ignoring cached reference load of wrong shape", path=str(cache_file)
            )

    def one_load(replication: int) -> np.ndarray:
        stream = RngStream.derive(seed, replication, StreamPurpose.REFERENCE)
        draw = draw_uniform(mesh, stream)
        return assemble_load_mc(mesh, forcing.evaluate, draw).values

    total = np.zeros(mesh.num_interior)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for load in pool.map(one_load, range(replications)):
            total += load
    mean = total / replications

    if cache_file is not None:
        cache_file.parent.mkdir(parents=True, exist_ok=True)
        np.save(cache_file, mean)
    return FemCoefficients(mean)


def run_table1(
    levels: Sequence[int],
    forcing: ForcingId | str = ForcingId.F1_EPS,
    reference_replications: int | None = None,
    seed: int | None = None,
    threads: int | None = None,
    cache_dir: Path | None = None,
) -> list[ExperimentRecord]:
    """
    Barycentric-rule errors against the Monte Carlo mean reference.

    One record per level.

    ``M`` of each record is the number of loads averaged into the reference.
    """
    settings = get_settings()
    replications = reference_replications
    if replications is None:
        replications = settings.experiment.table1_reference_replications
    seed = settings.seed if seed is None else seed
    threads = settings.threads if threads is None else threads
    if replications < 1:
        raise ParameterError(
            f"reference replications must be positive, got {replications}"
        )
    if threads < 1:
        raise ParameterError(f"threads must be positive, got {threads}")
    term = get_forcing(forcing)
    reference_term = _reference_forcing(term)

    records = []
    for n in levels:
        mesh = build_structured_mesh(n)
        context = RealizationContext.build(mesh)
        load = reference_load(
            context, reference_term, replications, seed, threads, cache_dir
        )
        reference, _ = solve_spd(context.stiffness, load)
        barycentric_load = assemble_load_barycentric(mesh, term.evaluate)
        barycentric, report = solve_spd(context.stiffness, barycentric_load)
        if not report.converged:
            logger.warning(
                "Barycentric solve did not converge",
                n=n,
                residual=report.relative_residual,
            )
        difference = FemCoefficients(barycentric.values - reference.values)
        if difference.is_finite:
            err_h1 = h1_seminorm(context.stiffness, difference)
            err_l2 = l2_norm(context.mass, difference)
        else:
            logger.error("Non-finite barycentric solution", n=n, forcing=term.label)
            err_h1 = err_l2 = math.nan
        records.append(
            ExperimentRecord(
                estimator=Estimator.BARYCENTRIC.value,
                forcing=term.label,
                n=n,
                h=mesh.grid_spacing,
                M=replications,
                err_h1=err_h1,
                err_l2=err_l2,
                seed=seed,
            )
        )
        logger.info("Barycentric baseline", n=n, err_h1=err_h1)
    return records
