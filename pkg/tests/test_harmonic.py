import dataclasses

import pytest

from harmonia.errors import BadComposition, BadPrime, BadRange, EngineInvariantError, ModulusOverflow, TooLarge
from harmonia.harmonic import (
    RESIDUE_FIELDS,
    Composition,
    compute_profile,
    mhs,
    naive_profile,
)
from harmonia.ring import is_prime, make_ring, rational_residue

SMALL_PRIMES = [p for p in range(7, 98) if is_prime(p)]


def test_golden_values_p7():
    prof = compute_profile(7)
    assert (prof.s1, prof.s2, prof.s3) == (14, 14, 35)
    assert (prof.d22, prof.t211, prof.d13, prof.p4) == (42, 35, 21, 14)
    assert prof.h_last == prof.p1 == 0
    assert prof.reflection_ok and prof.reflection_failures == 0


def test_bad_primes():
    for p in (2, 3, 5, 9, 49):
        with pytest.raises(BadPrime):
            compute_profile(p)
    with pytest.raises(ModulusOverflow):
        compute_profile(2**31 + 11)


def test_small_prime_override():
    prof = compute_profile(5, min_prime=5)
    assert prof.p1 == 0
    assert prof.reflection_ok


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_streaming_matches_naive(p):
    assert compute_profile(p) == naive_profile(p)


@pytest.mark.parametrize("p", [101, 1009])
def test_block_size_does_not_change_results(p):
    reference = compute_profile(p)
    for block in (1, 7, 64):
        assert compute_profile(p, block=block) == reference


@pytest.mark.parametrize("p", [7, 11, 13, 101, 10007])
def test_profile_internal_invariants(p):
    prof = compute_profile(p)
    m = p * p
    assert prof.u == prof.d13
    assert prof.s3 == (prof.u + prof.p4) % m
    assert prof.h_last == 0
    assert prof.reflection_ok
    for name in RESIDUE_FIELDS:
        assert 0 <= getattr(prof, name) < m


def test_reflection_failure_is_detected():
    # A corrupted checkpoint shifts the rebuilt H_j of one block.
    from harmonia.harmonic import _reflection_failures
    p, block = 31, 8
    m = p * p
    checkpoints = []
    h = 0
    for k in range(1, p):
        if (k - 1) % block == 0:
            checkpoints.append(h)
        h = (h + pow(k, -1, m)) % m
    assert _reflection_failures(p, m, block, checkpoints) == 0
    checkpoints[1] = (checkpoints[1] + 1) % m
    assert _reflection_failures(p, m, block, checkpoints) == block


@pytest.mark.parametrize("p, block", [(101, 16), (1009, 4096)])
def test_object_lanes_match_int64_lanes(p, block):
    from harmonia.harmonic import _stream_profile
    assert _stream_profile(p, block, object) == compute_profile(p, block=block)


def test_block_size_bounds():
    with pytest.raises(BadRange):
        compute_profile(7, block=0)
    with pytest.raises(BadRange):
        compute_profile(7, block=2**17)


def test_prefix_samples_cover_small_primes():
    from harmonia.harmonic import _sampled
    assert _sampled(1, 96, 97 // 8) == [1, 12, 24, 36, 48, 60, 72, 84, 96]
    assert _sampled(9, 16, 12) == [12]
    assert _sampled(1, 6, 1) == [1, 2, 3, 4, 5, 6]


@pytest.mark.parametrize("bad_k", [1, 12, 96])
def test_prefix_recurrence_catches_bad_inverse(monkeypatch, bad_k):
    import harmonia.harmonic as harmonic
    real = harmonic.iter_inverse_blocks

    def corrupted(first, last, m, block=4096, descending=False):
        for start, invs in real(first, last, m, block, descending):
            if not descending and start <= bad_k < start + len(invs):
                invs = list(invs)
                invs[bad_k - start] = (invs[bad_k - start] + 1) % m
            yield start, invs

    monkeypatch.setattr(harmonic, "iter_inverse_blocks", corrupted)
    with pytest.raises(EngineInvariantError):
        compute_profile(97, block=8)


def test_naive_profile_bounds():
    with pytest.raises(BadPrime):
        naive_profile(5)
    with pytest.raises(TooLarge):
        naive_profile(1009)


def test_naive_double_sum_p7():
    assert naive_profile(7).d22 == 42


def test_composition():
    c = Composition.of(2, 1, 1)
    assert c.depth == 3 and c.weight == 4
    assert str(c) == "H(2,1,1)"
    with pytest.raises(BadComposition):
        Composition.of(1, 1, 1, 1)
    with pytest.raises(BadComposition):
        Composition.of(0, 2)
    with pytest.raises(BadComposition):
        Composition(())


def test_mhs_examples():
    ring = make_ring(7, 2)
    assert mhs(Composition.of(1, 1), 2, ring) == rational_residue(1, 2, ring)
    assert mhs(Composition.of(1, 1, 1), 3, ring) == rational_residue(1, 6, ring)
    assert mhs(Composition.of(1, 3), 6, ring).value == 21
    assert mhs(Composition.of(2, 1), 1, ring).value == 0
    with pytest.raises(BadRange):
        mhs(Composition.of(1), 7, ring)


@pytest.mark.parametrize("p", [11, 13, 101])
def test_mhs_matches_profile(p):
    ring = make_ring(p, 2)
    prof = compute_profile(p)
    for parts, name in [((1,), "p1"), ((2,), "p2"), ((4,), "p4"), ((1, 3), "d13"), ((3, 1), "d31"),
                        ((2, 2), "d22"), ((2, 1), "d21"), ((2, 1, 1), "t211"), ((1, 2, 1), "t121")]:
        assert mhs(Composition.of(*parts), p - 1, ring).value == getattr(prof, name)


@pytest.mark.parametrize("p", [11, 13, 101])
def test_shuffle_relations_in_ring(p):
    ring = make_ring(p, 2)

    for N in range(0, p, max(1, p // 10)):
        def H(*parts):
            return mhs(Composition.of(*parts), N, ring)
        assert H(1) * H(3) == H(1, 3) + H(3, 1) + H(4)
        assert H(1) * H(2, 1) == 2 * H(2, 1, 1) + H(1, 2, 1) + H(3, 1) + H(2, 2)
        assert H(2) * H(2) == 2 * H(2, 2) + H(4)


def test_profile_residue_accessor():
    prof = compute_profile(7)
    assert prof.residue("s1") == make_ring(7, 2)(14)
    assert dataclasses.replace(prof, s1=0) != prof
