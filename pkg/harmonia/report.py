"""
Report records and writers.

Writers stream into a temp file next to the target and atomically replace
the target on success. If the run aborts, whatever was written so far is
kept as <out>.partial instead of being lost.
"""

from __future__ import annotations

import io
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import Iterable, List, Optional, TextIO, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator

from .checks import CheckResult
from .config import JSON_SAFE_INT

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["prime", "check", "modulus", "lhs", "rhs", "residual", "pass", "elapsed_ns"]


class ReportRecord(BaseModel):
    model_config = ConfigDict(populate_by_name=True, frozen=True)

    prime: int
    check: str
    modulus: int
    lhs: int
    rhs: int
    residual: int
    passed: bool = Field(..., alias="pass")
    elapsed_ns: int = 0

    @model_validator(mode="after")
    def residual_is_canonical(self) -> ReportRecord:
        if self.residual != (self.lhs - self.rhs) % self.modulus:
            raise ValueError(f"residual {self.residual} is not lhs - rhs mod {self.modulus}")
        if self.passed != (self.residual == 0):
            raise ValueError("pass must equal (residual == 0)")
        return self

    @field_serializer("prime", "modulus", "lhs", "rhs", "residual", "elapsed_ns", when_used="json")
    def json_safe_int(self, value: int) -> Union[int, str]:
        # Readers that parse JSON numbers as doubles lose precision above 2^53.
        return str(value) if abs(value) > JSON_SAFE_INT else value

    @classmethod
    def from_result(cls, result: CheckResult) -> ReportRecord:
        return cls(
            prime=result.prime,
            check=result.check_id,
            modulus=result.modulus,
            lhs=result.lhs.value,
            rhs=result.rhs.value,
            residual=result.residual.value,
            passed=result.passed,
            elapsed_ns=result.elapsed_ns,
        )

    def to_json_line(self) -> str:
        return self.model_dump_json(by_alias=True)


class BenchRecord(BaseModel):
    prime: int
    profile_s: float
    bernoulli_s: float
    checks_s: float
    total_s: float
    peak_rss_mb: float
    checks_passed: int
    checks_total: int


def _frame(records: Iterable[ReportRecord]) -> pd.DataFrame:
    rows = [r.model_dump(by_alias=True) for r in records]
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def render(records: List[ReportRecord], fmt: str, header: bool = True) -> str:
    if fmt == "jsonl":
        return "".join(r.to_json_line() + "\n" for r in records)
    if fmt == "csv":
        buf = io.StringIO()
        _frame(records).to_csv(buf, index=False, header=header, lineterminator="\n")
        return buf.getvalue()
    if fmt == "table":
        frame = _frame(records)
        frame["pass"] = frame["pass"].map({True: "ok", False: "FAIL"})
        passed = sum(r.passed for r in records)
        return frame.drop(columns=["elapsed_ns"]).to_string(index=False) + f"\n{passed}/{len(records)} checks pass\n"
    raise ValueError(f"Unknown report format: {fmt}")


def read_records(path: Union[str, Path]) -> List[ReportRecord]:
    """Load a JSON-lines or CSV report back into records."""
    path = Path(path)
    if path.suffix == ".csv":
        frame = pd.read_csv(path, dtype=str)
        return [
            ReportRecord.model_validate({**row, "pass": row["pass"] == "True"})
            for row in frame.to_dict(orient="records")
        ]
    return [
        ReportRecord.model_validate_json(line)
        for line in path.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]


class ReportWriter:
    """Ordered, flushed report output to a file (atomically) or a stream."""

    def __init__(self, out: Optional[Union[str, Path]], fmt: str, stream: Optional[TextIO] = None):
        self.out = Path(out) if out is not None else None
        self.fmt = fmt
        self.stream = stream
        self.count = 0
        self._fh: Optional[TextIO] = None
        self._temp_path: Optional[str] = None

    def __enter__(self) -> ReportWriter:
        if self.out is None:
            self._fh = self.stream or sys.stdout
            return self
        self.out.parent.mkdir(parents=True, exist_ok=True)
        # Same directory keeps the final rename on one filesystem.
        fd, self._temp_path = tempfile.mkstemp(
            dir=self.out.parent,
            prefix=f".{self.out.stem}_",
            suffix=".tmp",
        )
        self._fh = os.fdopen(fd, "w", encoding="utf-8", newline="")
        return self

    def write(self, records: List[ReportRecord]) -> None:
        self._fh.write(render(records, self.fmt, header=self.count == 0))
        self._fh.flush()
        self.count += len(records)

    def __exit__(self, exc_type, exc, tb) -> bool:
        if self.out is None:
            return False
        self._fh.flush()
        os.fsync(self._fh.fileno())
        self._fh.close()
        if exc_type is None:
            os.replace(self._temp_path, self.out)
            logger.info(f"Report saved to {self.out} ({self.count} records)")
        else:
            partial = self.out.with_suffix(self.out.suffix + ".partial")
            os.replace(self._temp_path, partial)
            logger.error(f"Run aborted; {self.count} records kept in {partial}")
        return False
