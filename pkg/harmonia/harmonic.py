"""
Harmonic quantities modulo p^2.

`compute_profile` is the production path: one forward pass over k = 1..p-1
fed by blocked batch inverses, then one backward pass for the reflection
congruence. Blocks are evaluated as numpy int64 lanes while p < 2^20
and as object lanes above that. `naive_profile` evaluates the same fields with literal nested
loops and is only meant as an oracle for small primes.

Index conventions follow H(s_1, ..., s_d) = sum over 1 <= i_1 < ... < i_d
of prod 1 / i_t^(s_t), so H(2,1) = sum_{i<j} 1/(i^2 j).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, fields
from functools import cached_property
from typing import List, Tuple

import numpy as np

from .config import INVERSE_BLOCK_SIZE, NAIVE_MAX_PRIME, PREFIX_SAMPLES
from .errors import (
    BadComposition,
    BadPrime,
    BadRange,
    EngineInvariantError,
    ModulusOverflow,
    TooLarge,
)
from .ring import Residue, ResidueRing, inverse_mod, is_prime, iter_inverse_blocks, make_ring

logger = logging.getLogger(__name__)

MAX_ENGINE_PRIME = 2**31

# Below this, p^2 < 2^40 and the int64 lanes of _mulmod cannot overflow.
NATIVE_PRIME_LIMIT = 2**20
MAX_LANE_BLOCK = 2**16
_SPLIT_BITS = 20
_LOW_MASK = (1 << _SPLIT_BITS) - 1


@dataclass(frozen=True)
class Composition:
    parts: Tuple[int, ...]

    def __post_init__(self):
        if not 1 <= len(self.parts) <= 3:
            raise BadComposition(f"Depth must be 1..3, got {len(self.parts)}")
        if any(s < 1 for s in self.parts):
            raise BadComposition(f"Parts must be positive: {self.parts}")

    @classmethod
    def of(cls, *parts: int) -> Composition:
        return cls(tuple(parts))

    @property
    def depth(self) -> int:
        return len(self.parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __str__(self) -> str:
        return "H(" + ",".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class HarmonicProfile:
    """
    Every per-prime quantity the checks consume, as canonical ints mod p^2.

    Double sums are H(m,n) = sum_{i<j} 1/(i^m j^n); triple sums likewise.
    s1, s2, s3 are the three theorem sums; tcube and u are the H_(k-1)
    companions used by the telescoping identities.
    """
    p: int
    h_last: int
    p1: int
    p2: int
    p3: int
    p4: int
    d13: int
    d31: int
    d22: int
    d21: int
    t211: int
    t121: int
    s1: int
    s2: int
    s3: int
    tcube: int
    u: int
    reflection_ok: bool
    reflection_failures: int = 0

    @cached_property
    def ring(self) -> ResidueRing:
        return make_ring(self.p, 2)

    def residue(self, name: str) -> Residue:
        return self.ring(getattr(self, name))


RESIDUE_FIELDS: Tuple[str, ...] = tuple(
    f.name for f in fields(HarmonicProfile)
    if f.name not in ("p", "reflection_ok", "reflection_failures")
)


def _validate_prime(p: int, min_prime: int) -> None:
    if p >= MAX_ENGINE_PRIME:
        raise ModulusOverflow(p, 2)
    if p < min_prime or not is_prime(p):
        raise BadPrime(f"Expected a prime p >= {min_prime}, got {p}")


def _lane_dtype(p: int):
    return np.int64 if p < NATIVE_PRIME_LIMIT else object


def _mulmod(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    """Elementwise a * b mod m; int64 lanes split b at 20 bits so no product passes 2^60."""
    if a.dtype == object:
        return a * b % m
    low = a * (b & _LOW_MASK) % m
    high = (a * (b >> _SPLIT_BITS) % m) << _SPLIT_BITS
    return (low + high) % m


def _dot(a: np.ndarray, b: np.ndarray, m: int) -> int:
    return int(_mulmod(a, b, m).sum()) % m


def _running(start: int, values: np.ndarray, m: int):
    """Inclusive and exclusive running sums start + v_1 + ... mod m."""
    inclusive = (start + np.cumsum(values)) % m
    return inclusive, (inclusive - values) % m


def _sampled(start: int, stop: int, stride: int) -> List[int]:
    first = -(-start // stride) * stride
    ks = list(range(first, stop + 1, stride))
    if start == 1 and ks[:1] != [1]:
        ks.insert(0, 1)
    return ks


def compute_profile(p: int, min_prime: int = 7, block: int = INVERSE_BLOCK_SIZE) -> HarmonicProfile:
    """
    Stream k = 1..p-1 once over Z/p^2 Z, one block of batch inverses at a time.

    Within a block every quantity is a running sum, so depth-3 terms read
    the exclusive (indices < k) prefix of their depth-2 sums, which read the
    exclusive prefix of the depth-1 sums. Carries cross block boundaries as
    plain ints.
    """
    _validate_prime(p, min_prime)
    if not 1 <= block <= MAX_LANE_BLOCK:
        raise BadRange(f"Inverse block size must lie in [1, {MAX_LANE_BLOCK}], got {block}")
    return _stream_profile(p, block, _lane_dtype(p))


def _stream_profile(p: int, block: int, lane) -> HarmonicProfile:
    m = p * p
    stride = max(1, p // PREFIX_SAMPLES)

    h = q2 = q3 = 0               # depth 1: H_k, sum 1/i^2, sum 1/i^3
    d21 = b12 = 0                 # depth 2 prefixes feeding depth 3
    p4 = d13 = d31 = d22 = t211 = t121 = 0
    s1 = s2 = s3 = tcube = u = 0
    checkpoints: List[int] = []

    for start, invs in iter_inverse_blocks(1, p - 1, m, block):
        checkpoints.append(h)
        x = np.array(invs, dtype=lane)
        x2 = _mulmod(x, x, m)
        x3 = _mulmod(x2, x, m)

        h_in, h_ex = _running(h, x, m)
        q2_in, q2_ex = _running(q2, x2, m)
        q3_in, q3_ex = _running(q3, x3, m)
        d21_in, d21_ex = _running(d21, _mulmod(x, q2_ex, m), m)
        b12_in, b12_ex = _running(b12, _mulmod(x2, h_ex, m), m)

        for k in _sampled(start, start + len(invs) - 1, stride):
            i = k - start
            before = int(h_in[i - 1]) if i else h
            if (int(h_in[i]) - before) * k % m != 1:
                raise EngineInvariantError(f"H_k = H_(k-1) + 1/k fails at p={p}, k={k}")

        t211 += _dot(x, d21_ex, m)
        t121 += _dot(x, b12_ex, m)
        d13 += _dot(x3, h_ex, m)
        d31 += _dot(x, q3_ex, m)
        d22 += _dot(x2, q2_ex, m)
        p4 += _dot(x2, x2, m)
        tcube += _dot(_mulmod(_mulmod(h_ex, h_ex, m), h_ex, m), x, m)
        hh = _mulmod(h_in, h_in, m)
        s1 += _dot(hh, x2, m)
        s2 += _dot(_mulmod(hh, h_in, m), x, m)
        s3 += _dot(h_in, x3, m)
        u += _dot(h_ex, x3, m)

        h, q2, q3 = int(h_in[-1]), int(q2_in[-1]), int(q3_in[-1])
        d21, b12 = int(d21_in[-1]), int(b12_in[-1])

    failures = _reflection_failures(p, m, block, checkpoints, lane)
    logger.debug(f"Profile p={p}: {len(checkpoints)} inverse blocks, {failures} reflection failures")

    return HarmonicProfile(
        p=p,
        h_last=h,
        p1=h,
        p2=q2,
        p3=q3,
        p4=p4 % m,
        d13=d13 % m,
        d31=d31 % m,
        d22=d22 % m,
        d21=d21,
        t211=t211 % m,
        t121=t121 % m,
        s1=s1 % m,
        s2=s2 % m,
        s3=s3 % m,
        tcube=tcube % m,
        u=u % m,
        reflection_ok=failures == 0,
        reflection_failures=failures,
    )


def _reflection_failures(p: int, m: int, block: int, checkpoints: List[int], lane=None) -> int:
    """
    Count j in 1..p-2 where 1/(j+1) + ... + 1/(p-1) differs from -H_j.

    The suffix sum is accumulated backwards from fresh inverses; H_j is
    rebuilt per block from the forward-pass checkpoint H_(start-1).
    """
    lane = lane or _lane_dtype(p)
    failures = 0
    suffix = 0
    blocks = iter_inverse_blocks(1, p - 1, m, block, descending=True)
    for (start, invs), h_start in zip(blocks, reversed(checkpoints)):
        x = np.array(invs, dtype=lane)
        hs, _ = _running(h_start, x, m)
        tail = (suffix + np.cumsum(x[::-1])[::-1] - x) % m
        bad = (tail + hs) % m != 0
        failures += int(np.count_nonzero(bad[:p - 1 - start]))
        suffix = (suffix + int(x.sum())) % m
    return failures


def naive_profile(p: int) -> HarmonicProfile:
    """Same fields as compute_profile, from literal nested loops (cubic)."""
    _validate_prime(p, 7)
    if p > NAIVE_MAX_PRIME:
        raise TooLarge(f"naive_profile is limited to p <= {NAIVE_MAX_PRIME}, got {p}")
    m = p * p
    n = p - 1
    r = [0] + [inverse_mod(k, m) for k in range(1, p)]
    r2 = [x * x % m for x in r]
    r3 = [x * y % m for x, y in zip(r, r2)]
    r4 = [x * x % m for x in r2]

    def harmonic(j: int) -> int:
        return sum(r[i] for i in range(1, j + 1)) % m

    def double(a: List[int], b: List[int]) -> int:
        total = 0
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                total += a[i] * b[j] % m
        return total % m

    def triple(a: List[int], b: List[int], c: List[int]) -> int:
        total = 0
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                aij = a[i] * b[j] % m
                for k in range(j + 1, n + 1):
                    total += aij * c[k]
        return total % m

    hk = [harmonic(k) for k in range(0, n + 1)]
    failures = 0
    for j in range(1, p - 1):
        tail = sum(r[k] for k in range(j + 1, n + 1))
        if (tail + hk[j]) % m:
            failures += 1

    return HarmonicProfile(
        p=p,
        h_last=hk[n],
        p1=sum(r) % m,
        p2=sum(r2) % m,
        p3=sum(r3) % m,
        p4=sum(r4) % m,
        d13=double(r, r3),
        d31=double(r3, r),
        d22=double(r2, r2),
        d21=double(r2, r),
        t211=triple(r2, r, r),
        t121=triple(r, r2, r),
        s1=sum(hk[k] ** 2 * r2[k] for k in range(1, n + 1)) % m,
        s2=sum(hk[k] ** 3 * r[k] for k in range(1, n + 1)) % m,
        s3=sum(hk[k] * r3[k] for k in range(1, n + 1)) % m,
        tcube=sum(hk[k - 1] ** 3 * r[k] for k in range(1, n + 1)) % m,
        u=sum(hk[k - 1] * r3[k] for k in range(1, n + 1)) % m,
        reflection_ok=failures == 0,
        reflection_failures=failures,
    )


def mhs(c: Composition, N: int, ring: ResidueRing) -> Residue:
    """
    H(s_1, ..., s_d) truncated at N, in `ring`.

    levels[t] holds the depth-(t+1) partial sum over indices seen so far;
    walking t from the deepest level down keeps each level reading its
    predecessor before k is added to it.
    """
    if N < 0 or N >= ring.p:
        raise BadRange(f"mhs needs 0 <= N < p = {ring.p}, got N = {N}")
    m = ring.m
    levels = [0] * c.depth
    for k in range(1, N + 1):
        x = inverse_mod(k, m)
        for t in range(c.depth - 1, -1, -1):
            below = levels[t - 1] if t else 1
            levels[t] = (levels[t] + pow(x, c.parts[t], m) * below) % m
    return ring(levels[-1])
