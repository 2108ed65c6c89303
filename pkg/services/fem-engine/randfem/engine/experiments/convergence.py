# randfem - Convergence Studies
# Replication loops, empirical errors and convergence-order fits

"""
Convergence studies of the randomized finite element solutions.

For each mesh level a study runs M independent realizations, in parallel
across replications, and folds their coefficient vectors into the empirical
error in replication order, so the emitted numbers do not depend on the
thread count. Timed studies run on a single worker. Replication r uses the
streams of (seed, r) on every level.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Sequence

import numpy as np
import structlog
from pydantic import BaseModel, Field, model_validator

from randfem.engine.assembly.coefficients import SigmaKind, get_sigma
from randfem.engine.experiments.forcing import ForcingId, ForcingTerm, get_forcing
from randfem.engine.experiments.norms import ErrorAccumulator, NormKind
from randfem.engine.experiments.records import ExperimentRecord, write_records_csv
from randfem.engine.mesh.structured import build_structured_mesh
from randfem.engine.solver.realization import (
    Estimator,
    RealizationContext,
    RealizationResult,
    run_realization,
)
from randfem.engine.utils.config import get_settings
from randfem.engine.utils.errors import ParameterError, SingularIntegrandError

logger = structlog.get_logger(__name__)

# Replications handed to the pool at a time; bounds memory at full scale.
BATCH_PER_THREAD = 16


class StudyConfig(BaseModel):
    """Inputs of one convergence study."""

    estimator: Estimator = Field(default=Estimator.MC)
    forcing: ForcingId = Field(default=ForcingId.F2)
    sigma: SigmaKind = Field(default=SigmaKind.UNIFORM)
    n_min: int = Field(default=2, ge=1, le=12)
    n_max: int = Field(default=6, ge=1, le=12)
    replications: int = Field(default=200, ge=2)
    seed: int = Field(default=0, ge=0, lt=2**64)
    threads: int = Field(default=1, ge=1)
    timing: bool = Field(default=False, description="Record median load seconds")
    tol: float | None = Field(default=None, gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def check_consistency(self) -> "StudyConfig":
        if self.n_min > self.n_max:
            raise ValueError(f"n range {self.n_min}..{self.n_max} is empty")
        if self.estimator is not Estimator.MC and self.sigma is not SigmaKind.UNIFORM:
            raise ValueError(f"{self.estimator.value.upper()} requires sigma=unit")
        return self

    @property
    def levels(self) -> range:
        return range(self.n_min, self.n_max + 1)


def _run_replications(
    config: StudyConfig,
    context: RealizationContext,
    forcing: ForcingTerm,
    level: int,
) -> tuple[ErrorAccumulator, list[float]]:
    sigma = get_sigma(config.sigma)
    accumulator = ErrorAccumulator(context)
    seconds: list[float] = []

    def realize(replication: int) -> RealizationResult:
        try:
            return run_realization(
                context.mesh,
                sigma,
                forcing.evaluate,
                config.estimator,
                seed=config.seed,
                replication=replication,
                context=context,
                tol=config.tol,
            )
        except SingularIntegrandError as exc:
            raise SingularIntegrandError(
                f"level {level}, replication {replication}, "
                f"seed {config.seed}: {exc}",
                triangle=exc.triangle,
            ) from exc

    # timed loads must not compete for the GIL with other replications
    workers = 1 if config.timing else config.threads
    if config.timing and config.threads > 1:
        logger.info("Timing study runs serially", requested_threads=config.threads)
    batch = BATCH_PER_THREAD * workers
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for start in range(0, config.replications, batch):
            stop = min(start + batch, config.replications)
            for result in pool.map(realize, range(start, stop)):
                if not result.report.converged:
                    logger.warning(
                        "Unconverged realization",
                        replication=result.replication,
                        residual=result.report.relative_residual,
                    )
                accumulator.add(result.coefficients)
                seconds.append(result.load_seconds)
    return accumulator, seconds


def run_convergence_study(
    config: StudyConfig, forcing: ForcingTerm | None = None
) -> list[ExperimentRecord]:
    """
    One record per level, in level order.

    ``forcing`` overrides the catalog entry named by ``config.forcing``.
    """
    forcing = forcing or get_forcing(config.forcing)
    records = []
    for n in config.levels:
        mesh = build_structured_mesh(n)
        context = RealizationContext.build(mesh)
        accumulator, seconds = _run_replications(config, context, forcing, n)
        record = ExperimentRecord(
            estimator=config.estimator.value,
            forcing=forcing.label,
            n=n,
            h=mesh.grid_spacing,
            M=config.replications,
            err_h1=accumulator.error(NormKind.H1),
            err_l2=accumulator.error(NormKind.L2),
            time_load_s=float(np.median(seconds)) if config.timing else math.nan,
            seed=config.seed,
        )
        logger.info(
            "Finished level",
            estimator=record.estimator,
            forcing=record.forcing,
            n=n,
            err_h1=record.err_h1,
            err_l2=record.err_l2,
        )
        records.append(record)
    return records


def fit_convergence_order(hs: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(h)."""
    h = np.asarray(hs, dtype=float)
    e = np.asarray(errors, dtype=float)
    if h.shape != e.shape or h.ndim != 1:
        raise ParameterError("hs and errors must be vectors of equal length")
    if h.size < 3:
        raise ParameterError(f"need at least 3 (h, error) pairs, got {h.size}")
    finite = np.isfinite(h).all() and np.isfinite(e).all()
    if not finite or (h <= 0).any() or (e <= 0).any():
        raise ParameterError("mesh sizes and errors must be finite and positive")
    slope, _ = np.polyfit(np.log(h), np.log(e), 1)
    return float(slope)


def fit_records(records: Sequence[ExperimentRecord], norm: NormKind | str) -> float:
    """Convergence order of a study against grid spacing."""
    column = "err_h1" if NormKind(norm) is NormKind.H1 else "err_l2"
    errors = [getattr(record, column) for record in records]
    return fit_convergence_order([record.h for record in records], errors)


# ============================================
# Figure suite
# ============================================

FIGURE_STUDIES = {
    "fig2a": (Estimator.MC, ForcingId.F1),
    "fig2b": (Estimator.MC, ForcingId.F2),
    "fig2c": (Estimator.IS, ForcingId.F1),
    "fig2d": (Estimator.IS, ForcingId.F2),
}
TIMING_FIGURES = {"fig3a": ForcingId.F1, "fig3b": ForcingId.F2}


def run_figure_suite(
    levels: range,
    replications: int,
    seed: int,
    out_dir: Path,
    threads: int | None = None,
) -> dict[str, Path]:
    """
    Run the four convergence studies and write the per-figure CSVs.

    The error-versus-time comparisons reuse the same studies with their
    median load-assembly times, so all four run on a single worker; the
    convergence CSVs carry ``nan`` timings so that they stay reproducible
    byte for byte.
    """
    threads = get_settings().threads if threads is None else threads
    if threads < 1:
        raise ParameterError(f"threads must be positive, got {threads}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    studies: dict[str, list[ExperimentRecord]] = {}
    for figure, (estimator, forcing) in FIGURE_STUDIES.items():
        config = StudyConfig(
            estimator=estimator,
            forcing=forcing,
            n_min=levels.start,
            n_max=levels.stop - 1,
            replications=replications,
            seed=seed,
            threads=threads,
            timing=True,
        )
        studies[figure] = run_convergence_study(config)

    written: dict[str, Path] = {}
    for figure, records in studies.items():
        path = out_dir / f"{figure}.csv"
        untimed = [r.model_copy(update={"time_load_s": math.nan}) for r in records]
        write_records_csv(untimed, path)
        written[figure] = path
    for figure, forcing in TIMING_FIGURES.items():
        rows = [
            record
            for name, (_, study_forcing) in FIGURE_STUDIES.items()
            if study_forcing is forcing
            for record in studies[name]
        ]
        path = out_dir / f"{figure}.csv"
        write_records_csv(rows, path)
        written[figure] = path
    logger.info("Wrote figure suite", directory=str(out_dir), files=sorted(written))
    return written
