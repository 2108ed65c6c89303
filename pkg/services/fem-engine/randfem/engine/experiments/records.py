# randfem - Experiment Records
# Study rows and their CSV representation

"""
Experiment records and CSV emission.

CSV schema (one header line)::

    estimator,forcing,n,h,M,err_h1,err_l2,time_load_s,seed

Reals are printed in scientific notation with 10 significant digits; missing
timings are written as ``nan``.
"""

import math
from pathlib import Path
from typing import Iterable

import pandas as pd
from pydantic import BaseModel, Field, field_validator

from randfem.engine.utils.errors import DataError

CSV_COLUMNS = [
    "estimator",
    "forcing",
    "n",
    "h",
    "M",
    "err_h1",
    "err_l2",
    "time_load_s",
    "seed",
]
FLOAT_FORMAT = "%.9e"


class ExperimentRecord(BaseModel):
    """One row of a convergence, timing or Table 1 study."""

    estimator: str = Field(..., description="mc, is or barycentric")
    forcing: str = Field(..., description="Forcing term id")
    n: int = Field(..., ge=1, le=12, description="Mesh level")
    h: float = Field(..., gt=0.0, description="Grid spacing 2^-n")
    M: int = Field(..., ge=1, description="Replications behind the errors")
    err_h1: float = Field(..., description="H1 seminorm error")
    err_l2: float = Field(..., description="L2 norm error")
    time_load_s: float = Field(default=math.nan, description="Median load seconds")
    seed: int = Field(..., ge=0, lt=2**64, description="Seed of every stream used")

    @field_validator("err_h1", "err_l2")
    @classmethod
    def non_negative_error(cls, value: float) -> float:
        if value < 0.0:
            raise ValueError(f"errors must be non-negative, got {value}")
        return value


def records_to_frame(records: Iterable[ExperimentRecord]) -> pd.DataFrame:
    rows = [record.model_dump() for record in records]
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def format_records_csv(records: Iterable[ExperimentRecord]) -> str:
    frame = records_to_frame(records)
    return frame.to_csv(
        index=False, float_format=FLOAT_FORMAT, na_rep="nan", lineterminator="\n"
    )


def write_records_csv(records: Iterable[ExperimentRecord], path: Path) -> None:
    Path(path).write_text(format_records_csv(records), encoding="utf-8")


def read_records_csv(path: Path) -> list[ExperimentRecord]:
    """Parse a CSV written by :func:`write_records_csv` back into records."""
    try:
        frame = pd.read_csv(path, dtype={"estimator": str, "forcing": str, "seed": str})
    except (OSError, pd.errors.ParserError) as exc:
        raise DataError(f"cannot read records from {path}: {exc}") from exc
    missing = [column for column in CSV_COLUMNS if column not in frame.columns]
    if missing:
        raise DataError(f"{path} lacks columns {missing}")
    return [
        ExperimentRecord(
            estimator=row.estimator,
            forcing=row.forcing,
            n=int(row.n),
            h=float(row.h),
            M=int(row.M),
            err_h1=float(row.err_h1),
            err_l2=float(row.err_l2),
            time_load_s=float(row.time_load_s),
            seed=int(row.seed),
        )
        for row in frame.itertuples(index=False)
    ]
