"""Experiment reports and their CSV/JSON serializations."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

CSV_COLUMNS = (
    "experiment",
    "id",
    "param_name",
    "param_value",
    "grid_n",
    "pairing",
    "reference",
    "abs_error",
    "rel_error",
)


def relative_error(abs_error: float, reference: float) -> float:
    """abs_error / |reference|, or abs_error itself when the reference is 0."""
    return abs_error / abs(reference) if reference != 0 else abs_error


@dataclass(frozen=True)
class ExperimentRow:
    experiment: str
    id: str
    param_name: str
    param_value: float
    grid_n: int
    pairing: float
    reference: float
    abs_error: float
    rel_error: float

    @classmethod
    def build(cls, experiment, id, param_name, param_value, grid_n, pairing, reference) -> "ExperimentRow":
        abs_err = abs(pairing - reference)
        return cls(
            experiment=experiment,
            id=id,
            param_name=param_name,
            param_value=float(param_value),
            grid_n=int(grid_n),
            pairing=float(pairing),
            reference=float(reference),
            abs_error=abs_err,
            rel_error=relative_error(abs_err, reference),
        )

    def is_consistent(self) -> bool:
        """Stored error columns agree with the pairing/reference columns."""
        abs_err = abs(self.pairing - self.reference)
        return abs_err == self.abs_error and relative_error(abs_err, self.reference) == self.rel_error


@dataclass(frozen=True)
class Check:
    """One pass/fail criterion: ``value <= threshold`` unless ``passed`` is given explicitly."""

    name: str
    value: float
    threshold: float | None
    passed: bool

    @classmethod
    def at_most(cls, name: str, value: float, threshold: float) -> "Check":
        return cls(name=name, value=float(value), threshold=float(threshold), passed=bool(value <= threshold))

    @classmethod
    def holds(cls, name: str, ok: bool, value: float = 0.0) -> "Check":
        return cls(name=name, value=float(value), threshold=None, passed=bool(ok))


@dataclass
class ExperimentReport:
    experiment: str
    rows: list[ExperimentRow] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def sorted_rows(self) -> list[ExperimentRow]:
        return sorted(self.rows, key=lambda r: (r.id, r.param_value, r.grid_n))

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "passed": self.passed,
            "rows": [asdict(r) for r in self.sorted_rows()],
            "checks": [asdict(c) for c in self.checks],
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentReport":
        return cls(
            experiment=data["experiment"],
            rows=[ExperimentRow(**r) for r in data.get("rows", [])],
            checks=[Check(**c) for c in data.get("checks", [])],
            metadata=dict(data.get("metadata", {})),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.sorted_rows():
            writer.writerow([_fmt(getattr(row, c)) for c in CSV_COLUMNS])
        return buf.getvalue()


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit(report: ExperimentReport, fmt: str, path: str | Path) -> Path:
    """Write ``report`` as ``csv`` or ``json``; rows are sorted by id then parameter."""
    path = Path(path)
    if fmt == "csv":
        text = report.to_csv()
    elif fmt == "json":
        text = report.to_json()
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path


def write_table(path: str | Path, header: tuple[str, ...], rows) -> Path:
    """Plain CSV table (e.g. kernel mass profiles) with repr-formatted floats."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path
