"""
Bernoulli numbers, exactly and modulo a prime.

Convention: B_1 = -1/2, from B_0 = 1 and sum_{k=0}^{n} C(n+1, k) B_k = 0.
"""

from __future__ import annotations

import logging
import threading
from fractions import Fraction
from math import comb
from typing import List

from .config import BERNOULLI_EXACT_MAX
from .errors import BadPrime, DenominatorDivisibleByP, EngineInvariantError, TooLarge
from .ring import Residue, inverse_mod, is_prime, make_ring

logger = logging.getLogger(__name__)

BigRational = Fraction

_exact_table: List[Fraction] = [Fraction(1)]
_exact_lock = threading.Lock()


def bernoulli_exact(n: int) -> BigRational:
    """Return B_n as a reduced Fraction, extending the shared memo table."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > BERNOULLI_EXACT_MAX:
        raise TooLarge(f"Exact Bernoulli numbers are bounded by n <= {BERNOULLI_EXACT_MAX}, got {n}")
    with _exact_lock:
        for m in range(len(_exact_table), n + 1):
            s = sum(comb(m + 1, k) * b for k, b in enumerate(_exact_table[:m]) if b)
            _exact_table.append(-s / (m + 1))
        return _exact_table[n]


def bernoulli_mod_p(n: int, p: int) -> Residue:
    """
    Image of B_n in Z/pZ by running the defining recurrence mod p.

    Binomial rows C(j+1, .) are advanced one Pascal step per index, so the
    whole run is O(n^2) additions mod p.
    """
    ring = make_ring(p, 1)
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > p - 3:
        raise DenominatorDivisibleByP(
            f"B_{n} mod {p}: recurrence denominators reach p (needs n <= p - 3)")
    values = [1]
    row = [1, 1]  # C(1, .)
    for j in range(1, n + 1):
        row = [1] + [(row[i - 1] + row[i]) % p for i in range(1, len(row))] + [1]
        s = sum(row[k] * values[k] for k in range(j)) % p
        values.append(-s * inverse_mod(j + 1, p) % p)
    return ring(values[n])


def _power_sum(n: int, e: int, m: int) -> int:
    """
    sum_{x=1}^{n} x^e mod m.

    x -> x^e is completely multiplicative, so pow() runs only at primes and
    a composite x reuses q^e * (x/q)^e for a recorded prime factor q. Both
    factors are at most x/2, so only powers up to n/2 are kept.
    """
    half = n // 2
    factor = [0] * (n + 1)
    powers = [0] * (half + 1)
    powers[1] = 1
    total = 1
    for x in range(2, n + 1):
        q = factor[x]
        if q:
            v = powers[q] * powers[x // q] % m
        else:
            v = pow(x, e, m)
            if x <= half:
                factor[2 * x::x] = [x] * (n // x - 1)
        if x <= half:
            powers[x] = v
        total += v
    return total % m


def b_target(p: int) -> Residue:
    """
    B_(p-5) mod p from the power sum S = sum_{x=1}^{p-1} x^(p-5) mod p^2.

    S is congruent to p * B_(p-5) mod p^2, so S is divisible by p and S/p
    reduced mod p is the answer.
    """
    if p < 7 or not is_prime(p):
        raise BadPrime(f"b_target needs a prime p >= 7, got {p}")
    m = p * p
    s = _power_sum(p - 1, p - 5, m)
    if s % p:
        raise EngineInvariantError(f"Power sum {s} mod {m} is not divisible by {p}")
    return make_ring(p, 1)(s // p)
