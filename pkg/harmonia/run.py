"""
Harmonia - harmonic-sum congruence verifier

Commands:
  verify --prime P [--checks id,...] [--format table|jsonl|csv]   Run checks at one prime
  scan --from A --to B [--jobs N] [--out FILE] [--format jsonl|csv]   Run every check at every prime in [A, B]
  oracle --max-prime P [--naive]   Compare the streaming engine against exact rationals
  identities --max-n N             Check the exact identities over the rationals for N = 1..max-n
  bench --prime P                  Time the full per-prime pipeline
  list                             Show the check registry

Exit codes: 0 all pass, 1 a check failed, 2 bad input, 3 internal error.

Examples:
  python -m harmonia verify --prime 7
  python -m harmonia scan --from 7 --to 10007 --jobs 4 --out data/scan.jsonl
"""

import argparse
import logging
import resource
import sys
import time
from typing import List, Optional

import pandas as pd

from .bernoulli import b_target
from .checks import list_checks, run_check, run_selected
from .config import LOG_FORMAT, NAIVE_MAX_PRIME, ORACLE_MAX_N, AppConfig, ScanConfig
from .errors import BadPrime, BadRange, InputError, TooLarge
from .harmonic import compute_profile, naive_profile
from .oracle import check_exact_identities, compare_profiles, exact_profile, reduce_profile
from .report import BenchRecord, ReportRecord, ReportWriter
from .ring import is_prime, make_ring
from .scan import primes_between, scan

logger = logging.getLogger("harmonia")


def cmd_verify(args) -> int:
    if not is_prime(args.prime):
        raise BadPrime(f"{args.prime} is not prime")
    if args.checks:
        ids = [c.strip() for c in args.checks.split(",") if c.strip()]
        if not ids:
            raise BadRange(f"--checks selected no check ids: {args.checks!r}")
    else:
        ids = [d.id for d in list_checks()]
    results = run_selected(args.prime, ids)
    records = [ReportRecord.from_result(r) for r in results]
    with ReportWriter(args.out, args.format, stream=sys.stdout) as writer:
        writer.write(records)
    passed = sum(r.passed for r in records)
    logger.info(f"p={args.prime}: {passed}/{len(records)} checks pass")
    return 0 if passed == len(records) else 1


def cmd_scan(args) -> int:
    config = ScanConfig(
        start=args.start,
        stop=args.stop,
        jobs=args.jobs if args.jobs is not None else AppConfig.default_jobs(),
        out=args.out,
        fmt=args.format,
    )
    stats = scan(config, stream=sys.stdout)
    if stats["failures"]:
        logger.warning(f"Failed checks (first 20): {', '.join(stats['failed'])}")
        return 1
    return 0


def cmd_oracle(args) -> int:
    if not 7 <= args.max_prime <= ORACLE_MAX_N - 1:
        raise BadRange(f"--max-prime must lie in [7, {ORACLE_MAX_N - 1}], got {args.max_prime}")
    mismatches = 0
    primes = primes_between(7, args.max_prime)
    for p in primes:
        fast = compute_profile(p)
        references = [("exact", reduce_profile(exact_profile(p - 1), make_ring(p, 2)))]
        if args.naive and p <= NAIVE_MAX_PRIME:
            references.append(("naive", naive_profile(p)))
        for name, ref in references:
            bad = [field for field, equal in compare_profiles(fast, ref) if not equal]
            mismatches += len(bad)
            for field in bad:
                print(f"p={p} {name}: {field} engine={getattr(fast, field)} reference={getattr(ref, field)}")
        logger.debug(f"p={p} compared")
    print(f"{len(primes)} primes compared, {mismatches} field mismatches")
    return 0 if mismatches == 0 else 1


def cmd_identities(args) -> int:
    if not 1 <= args.max_n <= ORACLE_MAX_N:
        raise TooLarge(f"--max-n must lie in [1, {ORACLE_MAX_N}], got {args.max_n}")
    failed = 0
    for n in range(1, args.max_n + 1):
        for name, holds in check_exact_identities(n):
            if not holds:
                failed += 1
                print(f"N={n}: {name} does not hold")
    print(f"Exact identities checked for N = 1..{args.max_n}: {failed} failures")
    return 0 if failed == 0 else 1


def cmd_bench(args) -> int:
    p = args.prime
    if p < 7 or not is_prime(p):
        raise BadPrime(f"bench needs a prime >= 7, got {p}")
    t0 = time.perf_counter()
    profile = compute_profile(p)
    t1 = time.perf_counter()
    b = b_target(p)
    t2 = time.perf_counter()
    results = [run_check(d.id, profile, b) for d in list_checks()]
    t3 = time.perf_counter()
    # ru_maxrss is reported in kilobytes on Linux.
    peak_kb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    record = BenchRecord(
        prime=p,
        profile_s=round(t1 - t0, 4),
        bernoulli_s=round(t2 - t1, 4),
        checks_s=round(t3 - t2, 4),
        total_s=round(t3 - t0, 4),
        peak_rss_mb=round(peak_kb / 1024, 1),
        checks_passed=sum(r.passed for r in results),
        checks_total=len(results),
    )
    print(record.model_dump_json())
    return 0 if record.checks_passed == record.checks_total else 1


def cmd_list(args) -> int:
    frame = pd.DataFrame([d.model_dump() for d in list_checks()])
    print(frame[["label", "id", "modulus_exponent", "min_prime", "description"]].to_string(index=False))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harmonia",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="Run checks at one prime")
    verify.add_argument("--prime", type=int, required=True)
    verify.add_argument("--checks", help="Comma-separated check ids (default: all)")
    verify.add_argument("--format", choices=["table", "jsonl", "csv"], default="table")
    verify.add_argument("--out", help="Write the report to this file instead of stdout")
    verify.set_defaults(handler=cmd_verify)

    scan_p = sub.add_parser("scan", help="Run every check over a prime range")
    scan_p.add_argument("--from", dest="start", type=int, required=True)
    scan_p.add_argument("--to", dest="stop", type=int, required=True)
    scan_p.add_argument("--jobs", type=int, default=None,
                        help="Worker processes (default: $HARMONIA_JOBS or 1)")
    scan_p.add_argument("--out", help="Report file (default: stdout)")
    scan_p.add_argument("--format", choices=["jsonl", "csv"], default=None,
                        help="Default: csv for a .csv --out, else jsonl")
    scan_p.set_defaults(handler=cmd_scan)

    oracle = sub.add_parser("oracle", help="Cross-check the engine against exact rationals")
    oracle.add_argument("--max-prime", type=int, required=True)
    oracle.add_argument("--naive", action="store_true", help="Also compare the nested-loop twin")
    oracle.set_defaults(handler=cmd_oracle)

    identities = sub.add_parser("identities", help="Exact identity sweep over the rationals")
    identities.add_argument("--max-n", type=int, default=100)
    identities.set_defaults(handler=cmd_identities)

    bench = sub.add_parser("bench", help="Time the per-prime pipeline")
    bench.add_argument("--prime", type=int, required=True)
    bench.set_defaults(handler=cmd_bench)

    list_p = sub.add_parser("list", help="Show the check registry")
    list_p.set_defaults(handler=cmd_list)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)

    if args.command == "scan" and args.format is None:
        args.format = "csv" if args.out and str(args.out).endswith(".csv") else "jsonl"

    try:
        return args.handler(args)
    except InputError as e:
        logger.error(str(e))
        return 2
    except Exception as e:
        logger.exception(f"Internal error: {e}")
        return 3


if __name__ == '__main__':
    sys.exit(main())
