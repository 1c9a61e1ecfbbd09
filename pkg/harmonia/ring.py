"""
Residue rings Z/p^e Z for a prime p and e in {1, 2}.

Residues are immutable and always kept in canonical form [0, m). Python
integers are unbounded, so the double-width intermediate of a product is
implicit; the m < 2^63 bound is still enforced so every residue fits a
machine word when exported.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, List, Tuple

from .config import INVERSE_BLOCK_SIZE, MODULUS_LIMIT
from .errors import (
    BadExponent,
    BadRange,
    CompositeModulusBase,
    ModulusOverflow,
    NotInvertible,
    RingMismatch,
)

logger = logging.getLogger(__name__)

# Deterministic for every n < 3.3 * 10^24, which covers 2^64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test, exact below 2^64."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def egcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) = s*a + t*b."""
    r0, r1 = a, b
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while r1 != 0:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return r0, s0, t0


def inverse_mod(a: int, m: int) -> int:
    """Inverse of a modulo m on plain integers."""
    g, s, _ = egcd(a % m, m)
    if g != 1:
        raise NotInvertible(a, m)
    return s % m


@dataclass(frozen=True)
class ResidueRing:
    p: int
    e: int
    m: int

    def __call__(self, value: int) -> Residue:
        return Residue(value % self.m, self)

    def coerce(self, value: int) -> Residue:
        return self(value)

    @property
    def zero(self) -> Residue:
        return Residue(0, self)

    @property
    def one(self) -> Residue:
        return Residue(1 % self.m, self)

    def __repr__(self) -> str:
        return f"ResidueRing(mod {self.p}^{self.e} = {self.m})"


def make_ring(p: int, e: int) -> ResidueRing:
    if e not in (1, 2):
        raise BadExponent(e)
    if p >= 2 and p ** e >= MODULUS_LIMIT:
        raise ModulusOverflow(p, e)
    if not is_prime(p):
        raise CompositeModulusBase(p)
    return ResidueRing(p=p, e=e, m=p ** e)


@dataclass(frozen=True)
class Residue:
    value: int
    ring: ResidueRing

    def __post_init__(self):
        if not 0 <= self.value < self.ring.m:
            raise ValueError(f"{self.value} is not canonical mod {self.ring.m}")

    def _other(self, other) -> int:
        if isinstance(other, Residue):
            if other.ring != self.ring:
                raise RingMismatch(self.ring.m, other.ring.m)
            return other.value
        if isinstance(other, int):
            return other % self.ring.m
        return NotImplemented

    def __add__(self, other) -> Residue:
        v = self._other(other)
        if v is NotImplemented:
            return v
        return Residue((self.value + v) % self.ring.m, self.ring)

    __radd__ = __add__

    def __sub__(self, other) -> Residue:
        v = self._other(other)
        if v is NotImplemented:
            return v
        return Residue((self.value - v) % self.ring.m, self.ring)

    def __rsub__(self, other) -> Residue:
        v = self._other(other)
        if v is NotImplemented:
            return v
        return Residue((v - self.value) % self.ring.m, self.ring)

    def __mul__(self, other) -> Residue:
        v = self._other(other)
        if v is NotImplemented:
            return v
        return Residue(self.value * v % self.ring.m, self.ring)

    __rmul__ = __mul__

    def __neg__(self) -> Residue:
        return Residue(-self.value % self.ring.m, self.ring)

    def __pow__(self, n: int) -> Residue:
        if n < 0:
            return inv(self) ** -n
        return Residue(pow(self.value, n, self.ring.m), self.ring)

    def lift(self) -> int:
        return self.value

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.ring.m})"


def mul(a: Residue, b: Residue) -> Residue:
    if a.ring != b.ring:
        raise RingMismatch(a.ring.m, b.ring.m)
    return a * b


def inv(a: Residue) -> Residue:
    if a.value % a.ring.p == 0:
        raise NotInvertible(a.value, a.ring.m)
    return Residue(inverse_mod(a.value, a.ring.m), a.ring)


def iter_inverse_blocks(
    first: int,
    last: int,
    m: int,
    block: int = INVERSE_BLOCK_SIZE,
    descending: bool = False,
) -> Iterator[Tuple[int, List[int]]]:
    """
    Yield inverses of first..last modulo m in blocks of at most `block`.

    Each block costs one extended-gcd inversion plus three multiplications
    per element (running products, then a backward sweep). Blocks are
    yielded as (start, [inv(start), inv(start+1), ...]) in ascending order,
    or from the top block down when `descending` is set; elements inside a
    block stay ascending.
    """
    starts = range(first, last + 1, block)
    if descending:
        starts = reversed(starts)
    for start in starts:
        stop = min(start + block - 1, last)
        prefix = [1] * (stop - start + 2)
        acc = 1
        for i, k in enumerate(range(start, stop + 1), 1):
            acc = acc * k % m
            prefix[i] = acc
        running = inverse_mod(acc, m)
        out = [0] * (stop - start + 1)
        for i in range(stop - start, -1, -1):
            out[i] = running * prefix[i] % m
            running = running * (start + i) % m
        yield start, out


def batch_inverses(n: int, ring: ResidueRing) -> List[Residue]:
    """Return [inv(1), ..., inv(n)] in `ring` by blocked batch inversion."""
    if n < 1 or n >= ring.p:
        raise BadRange(f"batch_inverses needs 1 <= n < p = {ring.p}, got n = {n}")
    result: List[Residue] = []
    for _, values in iter_inverse_blocks(1, n, ring.m):
        result.extend(Residue(v, ring) for v in values)
    return result


def rational_residue(num: int, den: int, ring: ResidueRing) -> Residue:
    """Embed num/den into the ring; num may be negative."""
    if den == 0 or den % ring.p == 0:
        raise NotInvertible(den, ring.m)
    return Residue(num % ring.m * inverse_mod(den % ring.m, ring.m) % ring.m, ring)
