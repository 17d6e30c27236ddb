"""
Result records and their CSV form.

Every row carries the schema version; floats are written with 9 significant
digits so that reruns with the same seed produce byte-identical files.
"""

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, TextIO

from qeclab.constants import CSV_SCHEMA_VERSION
from qeclab.exceptions import InvalidArgumentError
from qeclab.misc import format_float

COLUMNS = (
    "schema_version", "experiment", "N", "D", "depth", "depth_scaled",
    "point_name", "point", "statistic", "value", "stderr", "trials", "seed", "capped",
)


@dataclass(frozen=True)
class ResultRecord:
    """
    One aggregated statistic at one sweep point.

    ``seed`` is the child seed of the trial behind the row, enough to replay
    it. Rows averaging several trials leave it empty; their trials appear as
    raw rows when ``raw`` is set.
    """

    experiment: str
    n_qubits: int
    dimension: int
    depth: Optional[float]
    point_name: str
    point: Optional[float]
    statistic: str
    value: float
    stderr: float = 0.0
    trials: int = 1
    seed: Optional[int] = None
    capped: bool = False

    def __post_init__(self):
        if self.stderr < 0 or math.isnan(self.stderr):
            raise InvalidArgumentError(f"stderr must be >= 0, got {self.stderr}")
        if not math.isfinite(self.value) and not self.capped:
            raise InvalidArgumentError(f"non-finite value for {self.statistic} must be flagged capped")

    @property
    def depth_scaled(self) -> Optional[float]:
        if self.depth is None:
            return None
        return self.depth / math.sqrt(self.n_qubits)

    def to_row(self) -> List[str]:
        return [
            str(CSV_SCHEMA_VERSION),
            self.experiment,
            str(self.n_qubits),
            str(self.dimension),
            format_float(self.depth),
            format_float(self.depth_scaled),
            self.point_name,
            format_float(self.point),
            self.statistic,
            format_float(self.value),
            format_float(self.stderr),
            str(self.trials),
            "" if self.seed is None else str(self.seed),
            "1" if self.capped else "0",
        ]


def write_csv(records: Iterable[ResultRecord], stream: TextIO):
    """Write a header and one line per record."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in records:
        writer.writerow(r.to_row())


def records_to_csv(records: Iterable[ResultRecord]) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def save_csv(records: Iterable[ResultRecord], path: str):
    with open(path, "w", encoding="utf-8", newline="") as f:
        write_csv(records, f)


def _opt_float(s: str) -> Optional[float]:
    return None if s == "" else float(s)


def read_csv(stream: TextIO) -> List[ResultRecord]:
    """Parse a file written by :func:`write_csv`."""
    reader = csv.DictReader(stream)
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise InvalidArgumentError(f"unexpected CSV header {reader.fieldnames}")
    out = []
    for row in reader:
        if int(row["schema_version"]) != CSV_SCHEMA_VERSION:
            raise InvalidArgumentError(f"unsupported schema version {row['schema_version']}")
        out.append(ResultRecord(
            experiment=row["experiment"],
            n_qubits=int(row["N"]),
            dimension=int(row["D"]),
            depth=_opt_float(row["depth"]),
            point_name=row["point_name"],
            point=_opt_float(row["point"]),
            statistic=row["statistic"],
            value=float(row["value"]),
            stderr=float(row["stderr"]),
            trials=int(row["trials"]),
            seed=None if row["seed"] == "" else int(row["seed"]),
            capped=row["capped"] == "1",
        ))
    return out
