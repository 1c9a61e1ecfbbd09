"""
Exact rational ground truth for the modular engine.

Everything here works over Fraction, which keeps each value reduced after
every operation. Costs are polynomial in N, so the bound N <= 200 applies.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, fields
from fractions import Fraction
from itertools import accumulate
from typing import Dict, List, Tuple

from .config import ORACLE_MAX_N
from .errors import NotInvertible, PrimeMismatch, TooLarge
from .harmonic import Composition, HarmonicProfile, RESIDUE_FIELDS
from .ring import ResidueRing, rational_residue

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExactProfile:
    N: int
    prefix: Tuple[Fraction, ...]  # H_0 .. H_N
    h_last: Fraction
    p1: Fraction
    p2: Fraction
    p3: Fraction
    p4: Fraction
    d13: Fraction
    d31: Fraction
    d22: Fraction
    d21: Fraction
    t211: Fraction
    t121: Fraction
    s1: Fraction
    s2: Fraction
    s3: Fraction
    tcube: Fraction
    u: Fraction


def _reciprocal_powers(N: int, e: int) -> List[Fraction]:
    return [Fraction(0)] + [Fraction(1, k ** e) for k in range(1, N + 1)]


def exact_sums(N: int) -> Dict[str, Fraction]:
    """Single sums over k = 1..N: H_N, power sums and the theorem sums."""
    r = _reciprocal_powers(N, 1)
    h = list(accumulate(r))
    ks = range(1, N + 1)
    return {
        "prefix": tuple(h),
        "h_last": h[N],
        "p1": sum(r),
        "p2": sum(_reciprocal_powers(N, 2)),
        "p3": sum(_reciprocal_powers(N, 3)),
        "p4": sum(_reciprocal_powers(N, 4)),
        "s1": sum((h[k] ** 2 * r[k] ** 2 for k in ks), Fraction(0)),
        "s2": sum((h[k] ** 3 * r[k] for k in ks), Fraction(0)),
        "s3": sum((h[k] * r[k] ** 3 for k in ks), Fraction(0)),
        "tcube": sum((h[k - 1] ** 3 * r[k] for k in ks), Fraction(0)),
        "u": sum((h[k - 1] * r[k] ** 3 for k in ks), Fraction(0)),
    }


def _double(a: List[Fraction], b: List[Fraction], N: int) -> Fraction:
    total = Fraction(0)
    for j in range(2, N + 1):
        inner = Fraction(0)
        for i in range(1, j):
            inner += a[i]
        total += inner * b[j]
    return total


def _triple(a: List[Fraction], b: List[Fraction], c: List[Fraction], N: int) -> Fraction:
    prefix_a = list(accumulate(a))  # prefix_a[j-1] = sum_{i<j} a_i
    total = Fraction(0)
    for k in range(3, N + 1):
        inner = Fraction(0)
        for j in range(2, k):
            inner += prefix_a[j - 1] * b[j]
        total += inner * c[k]
    return total


def exact_profile(N: int) -> ExactProfile:
    if not 1 <= N <= ORACLE_MAX_N:
        raise TooLarge(f"exact_profile needs 1 <= N <= {ORACLE_MAX_N}, got {N}")
    r1 = _reciprocal_powers(N, 1)
    r2 = _reciprocal_powers(N, 2)
    r3 = _reciprocal_powers(N, 3)
    return ExactProfile(
        N=N,
        d13=_double(r1, r3, N),
        d31=_double(r3, r1, N),
        d22=_double(r2, r2, N),
        d21=_double(r2, r1, N),
        t211=_triple(r2, r1, r1, N),
        t121=_triple(r1, r2, r1, N),
        **exact_sums(N),
    )


def reduce_profile(x: ExactProfile, ring: ResidueRing) -> HarmonicProfile:
    if ring.e != 2:
        raise ValueError(f"Profiles live mod p^2, got {ring!r}")
    if ring.p <= x.N:
        raise NotInvertible(ring.p, ring.m)

    def red(q: Fraction) -> int:
        return rational_residue(q.numerator, q.denominator, ring).value

    failures = 0
    for j in range(1, x.N):
        tail = x.h_last - x.prefix[j]
        if (red(tail) + red(x.prefix[j])) % ring.m:
            failures += 1

    values = {name: red(getattr(x, name)) for name in RESIDUE_FIELDS}
    return HarmonicProfile(
        p=ring.p,
        reflection_ok=failures == 0,
        reflection_failures=failures,
        **values,
    )


def compare_profiles(a: HarmonicProfile, b: HarmonicProfile) -> List[Tuple[str, bool]]:
    if a.p != b.p:
        raise PrimeMismatch(a.p, b.p)
    return [
        (f.name, getattr(a, f.name) == getattr(b, f.name))
        for f in fields(HarmonicProfile)
        if f.name != "p"
    ]


def exact_mhs(c: Composition, N: int) -> Fraction:
    """H(s_1, ..., s_d) truncated at N, over the rationals."""
    levels = [Fraction(0)] * c.depth
    for k in range(1, N + 1):
        for t in range(c.depth - 1, -1, -1):
            below = levels[t - 1] if t else 1
            levels[t] += Fraction(1, k ** c.parts[t]) * below
    return levels[-1]


def check_exact_identities(N: int) -> List[Tuple[str, bool]]:
    """
    Exact identities behind the proof, at upper bound N:
    the telescoped fourth-power identity, the H_(k-1)^3 expansion,
    the per-k telescoping step, and three quasi-shuffle products.
    """
    x = exact_sums(N)
    h = x["prefix"]
    telescoped = 4 * x["tcube"] + 6 * x["s1"] - 8 * x["u"] - 5 * x["p4"] == x["h_last"] ** 4
    expansion = x["tcube"] == x["s2"] - 3 * x["s1"] + 3 * x["u"] + 2 * x["p4"]
    step = all(
        h[k] ** 4 - h[k - 1] ** 4
        == Fraction(4, k) * h[k - 1] ** 3 + Fraction(6, k ** 2) * h[k] ** 2
        - Fraction(8, k ** 3) * h[k - 1] - Fraction(5, k ** 4)
        for k in range(1, N + 1)
    )

    def H(*parts: int) -> Fraction:
        return exact_mhs(Composition.of(*parts), N)

    shuffle_13 = H(1) * H(3) == H(1, 3) + H(3, 1) + H(4)
    shuffle_121 = H(1) * H(2, 1) == 2 * H(2, 1, 1) + H(1, 2, 1) + H(3, 1) + H(2, 2)
    shuffle_22 = H(2) * H(2) == 2 * H(2, 2) + H(4)
    return [
        ("eq13_telescoped", telescoped),
        ("eq14_expansion", expansion),
        ("telescoping_step", step),
        ("shuffle_1_3", shuffle_13),
        ("shuffle_1_21", shuffle_121),
        ("shuffle_2_2", shuffle_22),
    ]
