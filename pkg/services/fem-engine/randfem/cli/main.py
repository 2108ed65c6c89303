#!/usr/bin/env python3
"""
randfem - Command Line Interface
Mesh inspection, single realizations, convergence studies and the
barycentric baseline. Results go to standard output or ``--out``;
diagnostics go to standard error.
"""

import sys
from pathlib import Path
from typing import Any, Optional, Sequence

import click
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from randfem import __version__
from randfem.cli.run_config import Command, RunConfig, build_run_config
from randfem.engine.assembly.coefficients import get_sigma
from randfem.engine.experiments.convergence import (
    StudyConfig,
    run_convergence_study,
    run_figure_suite,
)
from randfem.engine.experiments.forcing import get_forcing
from randfem.engine.experiments.norms import h1_seminorm, l2_norm
from randfem.engine.experiments.records import format_records_csv, write_records_csv
from randfem.engine.experiments.table1 import run_table1
from randfem.engine.mesh.mesh_io import write_mesh
from randfem.engine.mesh.structured import build_structured_mesh
from randfem.engine.mesh.validation import validate_mesh
from randfem.engine.solver.realization import RealizationContext, run_realization
from randfem.engine.utils.config import get_settings
from randfem.engine.utils.errors import ConfigError, ParameterError, RandFemError
from randfem.engine.utils.logger import setup_logging

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_INTERRUPTED = 130

# CLI app setup
app = typer.Typer(
    name="randfem",
    help="randfem - randomized-quadrature finite elements for the Poisson problem",
    add_completion=False,
    rich_markup_mode="rich",
    pretty_exceptions_enable=False,
)
console = Console()
err_console = Console(stderr=True)


class OutputTracker:
    """Files written by the running command; removed again if it fails."""

    def __init__(self) -> None:
        self.paths: list[Path] = []

    def register(self, path: Path) -> Path:
        self.paths.append(Path(path))
        return Path(path)

    def cleanup(self) -> None:
        for path in reversed(self.paths):
            if path.is_file():
                path.unlink()
        self.paths.clear()


outputs = OutputTracker()

# ============================================
# Shared options
# ============================================

EstimatorOption = typer.Option(None, "--estimator", help="mc | is | barycentric")
ForcingOption = typer.Option(None, "--forcing", help="f1 | f1eps | f2 | const")
SigmaOption = typer.Option(None, "--sigma", help="unit | sine")
LevelsOption = typer.Option(None, "--n", help="Mesh level A or level range A..B")
ReplicationsOption = typer.Option(None, "--M", "-M", help="Replications")
SeedOption = typer.Option(None, "--seed", help="64-bit seed (default RANDFEM_SEED)")
TolOption = typer.Option(None, "--tol", help="CG relative residual tolerance")
OutOption = typer.Option(None, "--out", help="Output file (directory for reproduce)")
ThreadsOption = typer.Option(None, "--threads", help="Worker threads")
FullScaleOption = typer.Option(False, "--full-scale", help="Full-scale levels and M")
TimingOption = typer.Option(False, "--timing", help="Record median load times")
ConfigOption = typer.Option(None, "--config", help="Flat key = value config file")


def _flags(**params: Any) -> dict[str, Any]:
    """Option values as config keys; unset flags and switches become None."""
    flags = {key: value for key, value in params.items() if key != "config"}
    for switch in ("full_scale", "timing", "validate_mesh"):
        if switch in flags and not flags[switch]:
            flags[switch] = None
    return flags


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        outputs.register(out).write_text(text, encoding="utf-8")
        err_console.print(f"[green]Wrote[/green] {out}")


# ============================================
# Command runners
# ============================================


def run_mesh(config: RunConfig) -> None:
    mesh = build_structured_mesh(config.n_min)
    table = Table(title=f"Structured mesh n={config.n_min}")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", style="green")
    table.add_row("vertices", str(mesh.num_vertices))
    table.add_row("triangles", str(mesh.num_triangles))
    table.add_row("interior nodes", str(mesh.num_interior))
    table.add_row("h (max edge)", f"{mesh.h:.6g}")
    table.add_row("grid spacing", f"{mesh.grid_spacing:.6g}")
    if config.validate_mesh:
        report = validate_mesh(mesh, domain_area=1.0, raise_on_failure=False)
        table.add_row("total area", f"{report.total_area:.17g}")
        table.add_row("quasi-uniformity c", f"{report.quasi_uniformity_constant:.6g}")
        table.add_row("valid", "yes" if report.valid else "; ".join(report.failures))
        if not report.valid:
            console.print(table)
            raise RandFemError("mesh validation failed")
    console.print(table)
    if config.out is not None:
        write_mesh(mesh, outputs.register(config.out))


def run_solve(config: RunConfig) -> None:
    mesh = build_structured_mesh(config.n_min)
    context = RealizationContext.build(mesh)
    result = run_realization(
        mesh,
        get_sigma(config.sigma),
        get_forcing(config.forcing).evaluate,
        config.estimator,
        seed=config.seed,
        context=context,
        tol=config.tol,
    )
    if not result.report.converged:
        residual = result.report.relative_residual
        raise RandFemError(f"CG did not converge (relative residual {residual:.3e})")
    _emit(result.coefficients.to_text(), config.out)
    err_console.print(
        f"n={config.n_min} estimator={config.estimator.value} "
        f"iterations={result.report.iterations} "
        f"|u|_H1={h1_seminorm(context.stiffness, result.coefficients):.9e} "
        f"||u||_L2={l2_norm(context.mass, result.coefficients):.9e}"
    )


def run_study(config: RunConfig) -> None:
    study = StudyConfig(
        estimator=config.estimator,
        forcing=config.forcing,
        sigma=config.sigma,
        n_min=config.n_min,
        n_max=config.n_max,
        replications=config.replications,
        seed=config.seed,
        threads=config.threads,
        timing=config.timing,
        tol=config.tol,
    )
    _emit(format_records_csv(run_convergence_study(study)), config.out)


def run_table1_command(config: RunConfig) -> None:
    records = run_table1(
        config.levels,
        forcing=config.forcing,
        reference_replications=config.replications,
        seed=config.seed,
        threads=config.threads,
        cache_dir=get_settings().experiment.cache_dir,
    )
    _emit(format_records_csv(records), config.out)


def run_reproduce(config: RunConfig) -> None:
    out_dir = config.out or Path("results")
    experiment = get_settings().experiment
    table1_replications = (
        experiment.full_scale_replications
        if config.full_scale
        else experiment.table1_reference_replications
    )
    written = run_figure_suite(
        config.levels, config.replications, config.seed, out_dir, threads=config.threads
    )
    for path in written.values():
        outputs.register(path)
    table1_path = outputs.register(out_dir / "table1.csv")
    records = run_table1(
        range(3, config.n_max + 1) if config.n_max >= 3 else config.levels,
        reference_replications=table1_replications,
        seed=config.seed,
        threads=config.threads,
        cache_dir=experiment.cache_dir,
    )
    write_records_csv(records, table1_path)
    err_console.print(f"[green]Wrote[/green] {len(written) + 1} files to {out_dir}")


RUNNERS = {
    Command.MESH: run_mesh,
    Command.SOLVE: run_solve,
    Command.STUDY: run_study,
    Command.TABLE1: run_table1_command,
    Command.REPRODUCE: run_reproduce,
}


# ============================================
# Commands
# ============================================


@app.callback()
def configure(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Logging level"),
    log_format: Optional[str] = typer.Option(
        None, "--log-format", help="console | json"
    ),
):
    """Randomized-quadrature finite elements."""
    setup_logging(level=log_level, format_type=log_format)


@app.command()
def version():
    """Show randfem version information."""
    console.print(f"randfem {__version__}")


@app.command()
def mesh(
    n: Optional[str] = LevelsOption,
    out: Optional[Path] = OutOption,
    validate: bool = typer.Option(False, "--validate", help="Validate and report"),
    config: Optional[Path] = ConfigOption,
):
    """Build a structured unit-square mesh, print its counts, optionally export it."""
    flags = _flags(n=n, out=out, validate_mesh=validate)
    RUNNERS[Command.MESH](build_run_config(Command.MESH, flags, config))


@app.command()
def solve(
    estimator: Optional[str] = EstimatorOption,
    forcing: Optional[str] = ForcingOption,
    sigma: Optional[str] = SigmaOption,
    n: Optional[str] = LevelsOption,
    seed: Optional[int] = SeedOption,
    tol: Optional[float] = TolOption,
    out: Optional[Path] = OutOption,
    config: Optional[Path] = ConfigOption,
):
    """Compute one realization and write its coefficients, one per interior node."""
    flags = _flags(
        estimator=estimator,
        forcing=forcing,
        sigma=sigma,
        n=n,
        seed=seed,
        tol=tol,
        out=out,
    )
    RUNNERS[Command.SOLVE](build_run_config(Command.SOLVE, flags, config))


@app.command()
def study(
    estimator: Optional[str] = EstimatorOption,
    forcing: Optional[str] = ForcingOption,
    sigma: Optional[str] = SigmaOption,
    n: Optional[str] = LevelsOption,
    replications: Optional[int] = ReplicationsOption,
    seed: Optional[int] = SeedOption,
    tol: Optional[float] = TolOption,
    out: Optional[Path] = OutOption,
    threads: Optional[int] = ThreadsOption,
    full_scale: bool = FullScaleOption,
    timing: bool = TimingOption,
    config: Optional[Path] = ConfigOption,
):
    """Run a convergence study and write its CSV."""
    flags = _flags(
        estimator=estimator,
        forcing=forcing,
        sigma=sigma,
        n=n,
        replications=replications,
        seed=seed,
        tol=tol,
        out=out,
        threads=threads,
        full_scale=full_scale,
        timing=timing,
    )
    RUNNERS[Command.STUDY](build_run_config(Command.STUDY, flags, config))


@app.command()
def table1(
    forcing: Optional[str] = ForcingOption,
    n: Optional[str] = LevelsOption,
    replications: Optional[int] = ReplicationsOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    threads: Optional[int] = ThreadsOption,
    full_scale: bool = FullScaleOption,
    config: Optional[Path] = ConfigOption,
):
    """Barycentric-rule errors for the eps-shifted singular forcing."""
    flags = _flags(
        forcing=forcing,
        n=n,
        replications=replications,
        seed=seed,
        out=out,
        threads=threads,
        full_scale=full_scale,
    )
    RUNNERS[Command.TABLE1](build_run_config(Command.TABLE1, flags, config))


@app.command()
def reproduce(
    n: Optional[str] = LevelsOption,
    replications: Optional[int] = ReplicationsOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    threads: Optional[int] = ThreadsOption,
    full_scale: bool = FullScaleOption,
    config: Optional[Path] = ConfigOption,
):
    """Write every convergence, timing and Table 1 CSV into a directory."""
    flags = _flags(
        n=n,
        replications=replications,
        seed=seed,
        out=out,
        threads=threads,
        full_scale=full_scale,
    )
    RUNNERS[Command.REPRODUCE](build_run_config(Command.REPRODUCE, flags, config))


def parse_config(argv: Sequence[str], config_file: Path | None = None) -> RunConfig:
    """
    Parse ``[command, *flags]`` into a RunConfig without running anything.

    ``config_file`` is used when the arguments carry no ``--config``.
    """
    if not argv:
        raise ConfigError("command", "missing command")
    group = typer.main.get_command(app)
    name = argv[0]
    try:
        command = Command(name)
    except ValueError as exc:
        raise ConfigError("command", f"unknown command {name!r}") from exc
    with click.Context(group) as group_ctx:
        click_command = group.get_command(group_ctx, name)
        try:
            ctx = click_command.make_context(name, list(argv[1:]), parent=group_ctx)
        except click.UsageError as exc:
            raise ConfigError(name, exc.format_message()) from exc
    params = dict(ctx.params)
    file = params.pop("config", None) or config_file
    if "validate" in params:
        params["validate_mesh"] = params.pop("validate")
    return build_run_config(command, _flags(**params), file)


def main(argv: Sequence[str] | None = None):
    """
    Main entry point for the randfem CLI.

    Always ends with SystemExit: 0 on success, 2 for usage errors, 3 for
    numerical failures, 130 when interrupted.
    """
    outputs.paths.clear()
    try:
        result = app(
            args=list(argv) if argv is not None else None,
            prog_name="randfem",
            standalone_mode=False,
        )
    except (KeyboardInterrupt, click.exceptions.Abort):
        outputs.cleanup()
        err_console.print("\n[yellow]Operation cancelled by user[/yellow]")
        sys.exit(EXIT_INTERRUPTED)
    except click.ClickException as e:
        outputs.cleanup()
        e.show()
        sys.exit(e.exit_code)
    except ParameterError as e:
        outputs.cleanup()
        err_console.print(f"[red]Usage error:[/red] {e}")
        sys.exit(EXIT_USAGE)
    except ValidationError as e:
        outputs.cleanup()
        err_console.print(f"[red]Invalid settings:[/red] {e}")
        sys.exit(EXIT_USAGE)
    except RandFemError as e:
        outputs.cleanup()
        err_console.print(f"[red]Error:[/red] {e}")
        sys.exit(EXIT_NUMERIC)
    except Exception as e:
        outputs.cleanup()
        err_console.print(f"[red]Unexpected error: {e}[/red]")
        sys.exit(1)
    sys.exit(result if isinstance(result, int) else EXIT_OK)


if __name__ == "__main__":
    main()
