import dataclasses

import pytest

from harmonia.bernoulli import b_target
from harmonia.checks import (
    _assert_triangle,
    get_check,
    list_checks,
    p_times_b,
    run_all,
    run_check,
    run_selected,
)
from harmonia.errors import BadRange, EngineInvariantError, MissingBernoulli, PrimeTooSmall, UnknownCheck
from harmonia.harmonic import compute_profile
from harmonia.ring import make_ring

B_CHECKS = ["eq10", "eq11", "eq12", "eq16", "eq17", "main_s1", "main_s2", "main_s3"]


def test_registry_shape():
    checks = list_checks()
    assert len(checks) == 20
    assert len({c.id for c in checks}) == 20
    assert [c.label for c in checks] == [f"C{i}" for i in range(1, 21)]
    assert all(c.paper_ref for c in checks)
    assert {c.min_prime for c in checks} == {5, 7}
    assert [c.id for c in checks if c.min_prime == 5] == ["wolstenholme_h1", "reflection_eq6"]
    assert [c.id for c in checks if c.modulus_exponent == 1] == ["h2_mod_p", "con1_mod_p"]
    assert sorted(c.id for c in checks if c.uses_bernoulli) == sorted(B_CHECKS)


def test_eq8_records_upper_limit_reading():
    assert "p-1" in get_check("eq8").description


def test_run_all_p7():
    results = run_all(7)
    assert [r.check_id for r in results] == [c.id for c in list_checks()]
    assert all(r.passed for r in results)
    assert all(r.residual.value == 0 for r in results)


def test_worked_examples_p7():
    prof = compute_profile(7)
    b = b_target(7)
    s1 = run_check("main_s1", prof, b)
    assert (s1.lhs.value, s1.rhs.value, s1.modulus) == (14, 14, 49)
    s3 = run_check("main_s3", prof, b)
    assert (s3.lhs.value, s3.rhs.value) == (35, 35)
    h4 = run_check("eq17", prof, b)
    assert (h4.lhs.value, h4.rhs.value, h4.passed) == (14, 14, True)
    mod_p = run_check("con1_mod_p", prof)
    assert mod_p.modulus == 7 and mod_p.passed


@pytest.mark.parametrize("p", [11, 13, 101, 1009, 10007])
def test_run_all_passes(p):
    assert all(r.passed for r in run_all(p))


def test_prime_too_small():
    with pytest.raises(PrimeTooSmall):
        run_all(5)
    small = compute_profile(5, min_prime=5)
    assert run_check("wolstenholme_h1", small).passed
    assert run_check("reflection_eq6", small).passed
    with pytest.raises(PrimeTooSmall):
        run_check("main_s1", small, 0)


def test_run_selected_at_five():
    results = run_selected(5, ["reflection_eq6", "wolstenholme_h1"])
    assert [r.check_id for r in results] == ["wolstenholme_h1", "reflection_eq6"]
    assert all(r.passed for r in results)


def test_errors():
    prof = compute_profile(7)
    with pytest.raises(UnknownCheck):
        run_check("no_such_check", prof)
    with pytest.raises(MissingBernoulli):
        run_check("main_s1", prof)
    with pytest.raises(UnknownCheck):
        run_selected(7, ["main_s1", "bogus"])
    with pytest.raises(BadRange):
        run_selected(7, [])


@pytest.mark.parametrize("p", [7, 11, 13])
@pytest.mark.parametrize("check_id", B_CHECKS)
def test_lift_independence(p, check_id):
    prof = compute_profile(p)
    b = b_target(p)
    low = run_check(check_id, prof, b)
    high = run_check(check_id, prof, b.value + p)
    assert low.rhs == high.rhs
    assert low.same_outcome(high)


def test_p_times_b_lifts():
    ring = make_ring(13, 2)
    for num, den in [(4, 5), (-9, 10), (3, 2)]:
        values = {p_times_b(ring, num, den, 3 + t * 13) for t in range(5)}
        assert len(values) == 1


def test_failure_is_reported_with_operands():
    prof = compute_profile(11)
    b = b_target(11)
    bad = dataclasses.replace(prof, s1=(prof.s1 + 1) % 121)
    result = run_check("main_s1", bad, b)
    assert not result.passed
    assert result.residual.value == 1
    assert result.lhs.value == bad.s1


def test_eq17_reports_failing_link():
    prof = compute_profile(11)
    b = b_target(11)
    result = run_check("eq17", prof, (b.value + 1) % 11)
    assert not result.passed
    assert result.lhs.value == prof.p4
    assert result.rhs.value != (-2 * prof.d22) % 121


def test_triangle_guard():
    results = run_all(13)
    _assert_triangle(results)
    broken = [dataclasses.replace(r, passed=False) if r.check_id == "eq12" else r for r in results]
    with pytest.raises(EngineInvariantError):
        _assert_triangle(broken)


def test_deterministic():
    first, second = run_all(31), run_all(31)
    assert all(a.same_outcome(b) for a, b in zip(first, second))
