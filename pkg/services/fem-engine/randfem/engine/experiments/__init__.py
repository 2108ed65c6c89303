"""Forcing terms, norms, convergence studies and the barycentric baseline."""

from randfem.engine.experiments.convergence import (
    FIGURE_STUDIES,
    StudyConfig,
    fit_convergence_order,
    fit_records,
    run_convergence_study,
    run_figure_suite,
)
from randfem.engine.experiments.forcing import (
    ForcingId,
    ForcingTerm,
    constant_forcing,
    custom_forcing,
    f1,
    f1_eps,
    f2,
    get_forcing,
    reference_integral,
    sgn,
)
from randfem.engine.experiments.norms import (
    ErrorAccumulator,
    NormKind,
    empirical_error,
    h1_seminorm,
    l2_norm,
)
from randfem.engine.experiments.records import (
    CSV_COLUMNS,
    ExperimentRecord,
    format_records_csv,
    read_records_csv,
    write_records_csv,
)
from randfem.engine.experiments.table1 import (
    EXPECTED_H1_MAGNITUDES,
    reference_load,
    run_table1,
)

__all__ = [
    "CSV_COLUMNS",
    "EXPECTED_H1_MAGNITUDES",
    "FIGURE_STUDIES",
    "ErrorAccumulator",
    "ExperimentRecord",
    "ForcingId",
    "ForcingTerm",
    "NormKind",
    "StudyConfig",
    "constant_forcing",
    "custom_forcing",
    "empirical_error",
    "f1",
    "f1_eps",
    "f2",
    "fit_convergence_order",
    "fit_records",
    "format_records_csv",
    "get_forcing",
    "h1_seminorm",
    "l2_norm",
    "read_records_csv",
    "reference_integral",
    "reference_load",
    "run_convergence_study",
    "run_figure_suite",
    "run_table1",
    "sgn",
    "write_records_csv",
]
