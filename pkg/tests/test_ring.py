import random

import pytest

from harmonia.errors import (
    BadExponent,
    BadRange,
    CompositeModulusBase,
    ModulusOverflow,
    NotInvertible,
    RingMismatch,
)
from harmonia.ring import (
    batch_inverses,
    inv,
    inverse_mod,
    is_prime,
    iter_inverse_blocks,
    make_ring,
    mul,
    rational_residue,
)


def test_make_ring():
    assert make_ring(5, 2).m == 25
    assert make_ring(7, 1).m == 7
    assert make_ring(2147483647, 2).m == 2147483647 ** 2


@pytest.mark.parametrize("p, e, error", [
    (4, 2, CompositeModulusBase),
    (1, 1, CompositeModulusBase),
    (7, 3, BadExponent),
    (7, 0, BadExponent),
    (2**63, 1, ModulusOverflow),
    (3037000507, 2, ModulusOverflow),
])
def test_make_ring_errors(p, e, error):
    with pytest.raises(error):
        make_ring(p, e)


def test_is_prime_matches_trial_division():
    def slow(n):
        return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))
    assert [n for n in range(2000) if is_prime(n)] == [n for n in range(2000) if slow(n)]
    assert is_prime(2147483647)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


def test_mul():
    r25 = make_ring(5, 2)
    r49 = make_ring(7, 2)
    assert mul(r25(7), r25(8)).value == 6
    assert mul(r49(15), r49(36)).value == 1
    assert mul(r49.one, r49(30)).value == 30


def test_mul_rejects_ring_mismatch():
    with pytest.raises(RingMismatch):
        mul(make_ring(7, 1)(3), make_ring(7, 2)(3))
    with pytest.raises(RingMismatch):
        make_ring(5, 2)(3) + make_ring(7, 2)(3)


def test_inv():
    r25 = make_ring(5, 2)
    assert inv(r25.one).value == 1
    assert inv(r25(2)).value == 13
    with pytest.raises(NotInvertible):
        inv(r25(5))
    with pytest.raises(NotInvertible):
        inv(r25.zero)


def test_residue_is_canonical():
    r = make_ring(7, 2)
    assert r(-1).value == 48
    assert (r(3) - r(5)).value == 47
    assert (-r(0)).value == 0
    with pytest.raises(ValueError):
        type(r(0))(49, r)


def test_batch_inverses():
    r7 = make_ring(7, 1)
    assert [x.value for x in batch_inverses(1, r7)] == [1]
    assert [x.value for x in batch_inverses(6, r7)] == [1, 4, 5, 2, 3, 6]
    with pytest.raises(BadRange):
        batch_inverses(7, r7)
    with pytest.raises(BadRange):
        batch_inverses(0, r7)


@pytest.mark.parametrize("p, e", [(7, 2), (101, 1), (101, 2), (8191, 2)])
def test_batch_inverses_match_single(p, e):
    ring = make_ring(p, e)
    assert batch_inverses(p - 1, ring) == [inv(ring(k)) for k in range(1, p)]


@pytest.mark.parametrize("block", [1, 3, 4, 10])
def test_inverse_blocks_any_block_size(block):
    m = 31 * 31
    blocks = list(iter_inverse_blocks(1, 30, m, block))
    flat = [v for _, values in blocks for v in values]
    assert flat == [inverse_mod(k, m) for k in range(1, 31)]
    down = list(iter_inverse_blocks(1, 30, m, block, descending=True))
    assert [start for start, _ in down] == [start for start, _ in reversed(blocks)]


def test_rational_residue():
    r49 = make_ring(7, 2)
    assert rational_residue(1, 1, r49).value == 1
    assert rational_residue(4, 5, r49).value == 40
    assert rational_residue(-9, 10, r49).value == 4
    with pytest.raises(NotInvertible):
        rational_residue(1, 14, r49)
    with pytest.raises(NotInvertible):
        rational_residue(1, 0, r49)


def test_rational_residue_times_denominator():
    rng = random.Random(1)
    ring = make_ring(10007, 2)
    for _ in range(200):
        a = rng.randint(-10**12, 10**12)
        b = rng.randint(1, 10**9)
        if b % ring.p == 0:
            continue
        assert (rational_residue(a, b, ring) * b).value == a % ring.m


@pytest.mark.parametrize("p, e", [(7, 1), (13, 2), (65521, 2)])
def test_ring_axioms(p, e):
    ring = make_ring(p, e)
    rng = random.Random(p * e)
    for _ in range(200):
        a, b, c = (ring(rng.randrange(ring.m)) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert a + b == b + a
        assert a * (b + c) == a * b + a * c
        assert a + ring.zero == a
        assert a * ring.one == a
        if a.value % p:
            assert a * inv(a) == ring.one
