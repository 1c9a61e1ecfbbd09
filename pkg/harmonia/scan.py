import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, Iterator, List, Optional, TextIO

from .checks import run_all
from .config import ScanConfig
from .report import ReportRecord, ReportWriter

logger = logging.getLogger(__name__)


def primes_between(a: int, b: int) -> List[int]:
    """Primes in [a, b] by a sieve of Eratosthenes over [0, b]."""
    if b < 2 or a > b:
        return []
    sieve = bytearray([1]) * (b + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(b ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytes(len(range(i * i, b + 1, i)))
    return [n for n in range(max(a, 2), b + 1) if sieve[n]]


def verify_prime(p: int) -> List[ReportRecord]:
    """Per-prime pipeline run inside a worker."""
    return [ReportRecord.from_result(r) for r in run_all(p)]


def _ordered_results(primes: List[int], jobs: int) -> Iterator[List[ReportRecord]]:
    if jobs == 1 or len(primes) <= 1:
        for p in primes:
            yield verify_prime(p)
        return
    executor = ProcessPoolExecutor(max_workers=jobs)
    try:
        # map() yields in submission order, which is the required output order.
        chunksize = max(1, len(primes) // (jobs * 16))
        yield from executor.map(verify_prime, primes, chunksize=chunksize)
    finally:
        executor.shutdown(wait=True, cancel_futures=True)


def scan(config: ScanConfig, stream: Optional[TextIO] = None) -> Dict[str, object]:
    primes = primes_between(config.start, config.stop)
    logger.info(f"Scanning {len(primes)} primes in [{config.start}, {config.stop}] with {config.jobs} worker(s)")

    start = time.perf_counter()
    failures: List[str] = []
    total = 0
    with ReportWriter(config.out, config.fmt, stream=stream) as writer:
        for i, records in enumerate(_ordered_results(primes, config.jobs), 1):
            writer.write(records)
            total += len(records)
            failures.extend(f"{r.check}@{r.prime}" for r in records if not r.passed)
            if i % 100 == 0:
                logger.info(f"  {i}/{len(primes)} primes done")
    elapsed = time.perf_counter() - start

    stats = {
        "primes": len(primes),
        "checks": total,
        "failures": len(failures),
        "failed": failures[:20],
        "elapsed_s": round(elapsed, 3),
    }
    logger.info("=== Scan Summary ===")
    logger.info(f"Primes: {stats['primes']} | Checks: {stats['checks']} | Failures: {stats['failures']}")
    logger.info(f"Elapsed: {stats['elapsed_s']} s")
    return stats
