"""
Registry of every congruence verified per prime.

Each entry pairs a descriptor with an evaluator returning one or more
(lhs, rhs) links as plain ints; a check passes when every link has a zero
residual in the declared modulus. Right-hand sides of the form
(num/den) * p * B only ever see B mod p: p * (b + t*p) = p * b mod p^2,
so any lift of the residue gives the same value.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from .bernoulli import b_target
from .errors import BadRange, EngineInvariantError, MissingBernoulli, PrimeTooSmall, UnknownCheck
from .harmonic import HarmonicProfile, compute_profile
from .ring import Residue, ResidueRing, make_ring, rational_residue

logger = logging.getLogger(__name__)

Links = List[Tuple[int, int]]
PB = Callable[[int, int], int]


class CheckDescriptor(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str = Field(..., description="Short stable name")
    label: str = Field(..., description="Registry position, C1..C20")
    description: str = Field(..., description="One-line statement of the congruence")
    modulus_exponent: int = Field(2, ge=1, le=2)
    min_prime: int = Field(7)
    paper_ref: str = Field(..., description="Equation label and anchor text")
    uses_bernoulli: bool = False


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    prime: int
    modulus: int
    lhs: Residue
    rhs: Residue
    residual: Residue
    passed: bool
    elapsed_ns: int

    def same_outcome(self, other: CheckResult) -> bool:
        """Equality ignoring elapsed time."""
        return (self.check_id, self.prime, self.modulus, self.lhs, self.rhs, self.residual, self.passed) == (
            other.check_id, other.prime, other.modulus, other.lhs, other.rhs, other.residual, other.passed)


class _Check(NamedTuple):
    descriptor: CheckDescriptor
    evaluate: Callable[[HarmonicProfile, PB], Links]


def p_times_b(ring: ResidueRing, num: int, den: int, b: Union[Residue, int]) -> Residue:
    """(num/den) * p * B in Z/p^2 Z from any integer lift of B mod p."""
    lift = b.value if isinstance(b, Residue) else b
    return rational_residue(num, den, ring) * ring(ring.p * lift)


def _check(label, check_id, description, paper_ref, evaluate, *, e=2, min_prime=7, uses_b=False) -> _Check:
    return _Check(
        CheckDescriptor(
            id=check_id,
            label=label,
            description=description,
            modulus_exponent=e,
            min_prime=min_prime,
            paper_ref=paper_ref,
            uses_bernoulli=uses_b,
        ),
        evaluate,
    )


_REGISTRY: Tuple[_Check, ...] = (
    _check("C1", "wolstenholme_h1", "H(1) = 0 mod p^2 (Wolstenholme)",
           r"Wolstenholme: H(1):=\sum_{k=1}^{p-1}1/k\equiv 0\,(\bmod{\,p^2})",
           lambda P, pb: [(P.p1, 0)], min_prime=5),
    _check("C2", "reflection_eq6", "1/(j+1)+...+1/(p-1) = -H_j mod p^2 for every j in 1..p-2",
           r"(6): \frac{1}{j+1}+\frac{1}{j+2}+\cdots",
           lambda P, pb: [(P.reflection_failures, 0)], min_prime=5),
    _check("C3", "h2_mod_p", "H(2) = 0 mod p",
           r"the well known congruence H(2)\equiv 0",
           lambda P, pb: [(P.p2, 0)], e=1),
    _check("C4", "eq7_chain", "H(1,2,1) = -S1 + H(1,3) + H(4) mod p^2",
           r"(7): -\sum_{j=1}^{p-1}\frac{H_j^2}{j^2}+H(1,3)+H(4)",
           lambda P, pb: [(P.t121, -P.s1 + P.d13 + P.p4)]),
    _check("C5", "eq8", "H(1,2,1) + H(3,1) = -S1 mod p^2 (printed upper limit n read as p-1)",
           r"(8): H(1,2,1)+H(3,1)\equiv -\sum",
           lambda P, pb: [(P.t121 + P.d31, -P.s1)]),
    _check("C6", "eq9", "H(1,2,1) + H(3,1) = -2H(2,1,1) - H(2,2) mod p^2",
           r"(9): -2H(2,1,1)-H(2,2)",
           lambda P, pb: [(P.t121 + P.d31, -2 * P.t211 - P.d22)]),
    _check("C7", "eq10", "H(2,1,1) = (3/5) p B_(p-5) mod p^2",
           r"(10): H(2,1,1)\equiv \frac{3}{5}pB_{p-5}",
           lambda P, pb: [(P.t211, pb(3, 5))], uses_b=True),
    _check("C8", "eq11", "H(2,2) = -(2/5) p B_(p-5) mod p^2",
           r"(11): H(2,2)\equiv -\frac{2}{5}pB_{p-5}",
           lambda P, pb: [(P.d22, pb(-2, 5))], uses_b=True),
    _check("C9", "eq12", "H(1,2,1) + H(3,1) = -(4/5) p B_(p-5) mod p^2",
           r"(12): -\frac{4}{5}pB_{p-5}",
           lambda P, pb: [(P.t121 + P.d31, pb(-4, 5))], uses_b=True),
    _check("C10", "shuffle_13_mod", "H(1)H(3) - H(1,3) - H(3,1) - H(4) = 0 mod p^2",
           r"H(1)H(3)=H(1,3)+H(3,1)+H(4)",
           lambda P, pb: [(P.p1 * P.p3 - P.d13 - P.d31 - P.p4, 0)]),
    _check("C11", "shuffle_121_mod", "H(1)H(2,1) - 2H(2,1,1) - H(1,2,1) - H(3,1) - H(2,2) = 0 mod p^2",
           r"H(1)H(2,1)=2H(2,1,1)+H(1,2,1)",
           lambda P, pb: [(P.p1 * P.d21 - 2 * P.t211 - P.t121 - P.d31 - P.d22, 0)]),
    _check("C12", "eq13", "4 Tcube + 6 S1 - 8 U - 5 H(4) = 0 mod p^2",
           r"(13): =H_{p-1}^4\equiv 0\pmod{p^2}",
           lambda P, pb: [(4 * P.tcube + 6 * P.s1 - 8 * P.u - 5 * P.p4, 0)]),
    _check("C13", "eq14_residue", "Tcube = S2 - 3 S1 + 3 U + 2 H(4) as residues",
           r"(14): \sum_{k=1}^{p-1}\frac{H_{k-1}^3}{k}=\sum_{k=1}^{p-1}\frac{H_k^3}{k}-3",
           lambda P, pb: [(P.tcube, P.s2 - 3 * P.s1 + 3 * P.u + 2 * P.p4)]),
    _check("C14", "eq15", "4 S2 - 6 S1 + 4 U + 3 H(4) = 0 mod p^2",
           r"(15): \equiv 0\pmod{p^2}",
           lambda P, pb: [(4 * P.s2 - 6 * P.s1 + 4 * P.u + 3 * P.p4, 0)]),
    _check("C15", "eq16", "H(1,3) = -(9/10) p B_(p-5) mod p^2, and U = H(1,3)",
           r"(16): H(1,3)\equiv -\frac{9}{10}pB_{p-5}",
           lambda P, pb: [(P.d13, pb(-9, 10)), (P.u, P.d13)], uses_b=True),
    _check("C16", "eq17", "H(4) = -2H(2,2) = (4/5) p B_(p-5) mod p^2",
           r"(17): H(4)\equiv -2H(2,2)\equiv \frac{4}{5}pB_{p-5}",
           lambda P, pb: [(P.p4, -2 * P.d22), (P.p4, pb(4, 5))], uses_b=True),
    _check("C17", "main_s1", "sum H_k^2/k^2 = (4/5) p B_(p-5) mod p^2",
           r"(3): \equiv\frac{4}{5}pB_{p-5}\pmod{p^2}",
           lambda P, pb: [(P.s1, pb(4, 5))], uses_b=True),
    _check("C18", "main_s2", "sum H_k^3/k = (3/2) p B_(p-5) mod p^2",
           r"(4): \equiv\frac{3}{2}pB_{p-5}\pmod{p^2}",
           lambda P, pb: [(P.s2, pb(3, 2))], uses_b=True),
    _check("C19", "main_s3", "sum H_k/k^3 = -(1/10) p B_(p-5) mod p^2",
           r"(5): \equiv -\frac{1}{10}pB_{p-5}\pmod{p^2}",
           lambda P, pb: [(P.s3, pb(-1, 10))], uses_b=True),
    _check("C20", "con1_mod_p", "sum H_k^2/k^2 = 0 mod p",
           r"(1): \frac{H_k^2}{k^2}\equiv 0\pmod{p}",
           lambda P, pb: [(P.s1, 0)], e=1),
)

_BY_ID: Dict[str, _Check] = {c.descriptor.id: c for c in _REGISTRY}

# If these pass, eq12 follows as their linear combination.
_TRIANGLE = ("eq8", "eq9", "eq10", "eq11")


def list_checks() -> List[CheckDescriptor]:
    return [c.descriptor for c in _REGISTRY]


def get_check(check_id: str) -> CheckDescriptor:
    if check_id not in _BY_ID:
        raise UnknownCheck(check_id)
    return _BY_ID[check_id].descriptor


def run_check(check_id: str, profile: HarmonicProfile, b: Optional[Union[Residue, int]] = None) -> CheckResult:
    """Evaluate one check; `b` is B_(p-5) mod p as a residue or any integer lift of it."""
    if check_id not in _BY_ID:
        raise UnknownCheck(check_id)
    desc, evaluate = _BY_ID[check_id]
    p = profile.p
    if p < desc.min_prime:
        raise PrimeTooSmall(check_id, p, desc.min_prime)
    if desc.uses_bernoulli and b is None:
        raise MissingBernoulli(check_id)

    t0 = time.perf_counter_ns()
    ring = make_ring(p, desc.modulus_exponent)
    square = profile.ring

    def pb(num: int, den: int) -> int:
        return p_times_b(square, num, den, b).value

    links = [(lhs % ring.m, rhs % ring.m) for lhs, rhs in evaluate(profile, pb)]
    lhs, rhs = next(((l, r) for l, r in links if l != r), links[0])
    elapsed = time.perf_counter_ns() - t0

    result = CheckResult(
        check_id=check_id,
        prime=p,
        modulus=ring.m,
        lhs=ring(lhs),
        rhs=ring(rhs),
        residual=ring(lhs - rhs),
        passed=lhs == rhs,
        elapsed_ns=elapsed,
    )
    logger.debug(f"{check_id} at p={p}: {'pass' if result.passed else 'FAIL'} in {elapsed} ns")
    if not result.passed:
        logger.warning(
            f"{desc.label} {check_id} failed at p={p}: lhs={lhs} rhs={rhs} "
            f"residual={result.residual.value} (mod {ring.m})")
    return result


def run_selected(p: int, check_ids: Sequence[str]) -> List[CheckResult]:
    """Compute the profile (and B only if needed) once, then run `check_ids` in registry order."""
    wanted = set(check_ids)
    if not wanted:
        raise BadRange("No checks selected")
    for check_id in wanted:
        get_check(check_id)
    selected = [c.descriptor for c in _REGISTRY if c.descriptor.id in wanted]
    for desc in selected:
        if p < desc.min_prime:
            raise PrimeTooSmall(desc.id, p, desc.min_prime)

    min_prime = min((d.min_prime for d in selected), default=7)
    profile = compute_profile(p, min_prime=min_prime)
    b = b_target(p) if any(d.uses_bernoulli for d in selected) else None
    results = [run_check(d.id, profile, b) for d in selected]
    _assert_triangle(results)
    return results


def run_all(p: int) -> List[CheckResult]:
    return run_selected(p, [c.descriptor.id for c in _REGISTRY])


def _assert_triangle(results: Iterable[CheckResult]) -> None:
    by_id = {r.check_id: r for r in results}
    if not all(k in by_id for k in _TRIANGLE + ("eq12",)):
        return
    if all(by_id[k].passed for k in _TRIANGLE) and not by_id["eq12"].passed:
        p = by_id["eq12"].prime
        raise EngineInvariantError(f"eq8..eq11 pass but eq12 fails at p={p}")
