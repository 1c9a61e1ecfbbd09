import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import BadRange


class AppConfig:
    # Runtime defaults; HARMONIA_JOBS is the only environment hook.
    JOBS_ENV = "HARMONIA_JOBS"

    @classmethod
    def default_jobs(cls) -> int:
        raw = os.getenv(cls.JOBS_ENV, "1")
        try:
            jobs = int(raw)
        except ValueError:
            raise BadRange(f"{cls.JOBS_ENV} must be a positive integer, got {raw!r}") from None
        if jobs < 1:
            raise BadRange(f"{cls.JOBS_ENV} must be a positive integer, got {jobs}")
        return jobs


# Engine tuning. None of these change results.
INVERSE_BLOCK_SIZE = 4096
# k = 1 plus every (p // PREFIX_SAMPLES)-th k gets the in-pass prefix check.
PREFIX_SAMPLES = 8

# Bounds of the oracle paths.
ORACLE_MAX_N = 200
NAIVE_MAX_PRIME = 1000
BERNOULLI_EXACT_MAX = 1000
RECURRENCE_ORACLE_MAX_PRIME = 499

MODULUS_LIMIT = 2**63
JSON_SAFE_INT = 2**53

REPORT_FORMATS = ("table", "jsonl", "csv")
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


@dataclass
class ScanConfig:
    start: int
    stop: int
    jobs: int = field(default_factory=AppConfig.default_jobs)
    out: Optional[Path] = None
    fmt: str = "jsonl"

    def __post_init__(self):
        if self.start < 7:
            raise BadRange(f"Scan must start at 7 or above, got {self.start}")
        if self.start > self.stop:
            raise BadRange(f"Empty scan range [{self.start}, {self.stop}]")
        if self.jobs < 1:
            raise BadRange(f"--jobs must be at least 1, got {self.jobs}")
        if self.fmt not in ("jsonl", "csv"):
            raise BadRange(f"Scan format must be jsonl or csv, got {self.fmt}")
        if self.out is not None:
            self.out = Path(self.out)
