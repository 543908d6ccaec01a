import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slowmix.arithmetic import (
    ConvergentTable,
    GrowthPolicy,
    PartialQuotients,
    best_approx_verify,
    approx_bounds_verify,
    build_liouville_pair,
    convergents,
    nearest_int_distance,
    paper_growth,
    real_value,
)
from slowmix.errors import CapacityError, InvalidInputError


# ---------------------------------------------------------------- convergents

def test_convergents_golden_prefix():
    t = convergents(PartialQuotients((0, 1, 1, 1, 1)))
    assert [r[2] for r in t.rows] == [1, 1, 2, 3, 5]


def test_convergents_single_seed():
    t = convergents(PartialQuotients((3,)))
    assert t.rows == ((0, 3, 1),)


def test_convergents_0222():
    # hand recurrence: 0/1, 1/2, 2/5, 5/12
    t = convergents(PartialQuotients((0, 2, 2, 2)))
    assert [(r[1], r[2]) for r in t.rows] == [(0, 1), (1, 2), (2, 5), (5, 12)]


def test_convergents_empty_rejected():
    with pytest.raises(InvalidInputError):
        PartialQuotients(())


def test_bad_quotient_rejected():
    with pytest.raises(InvalidInputError):
        PartialQuotients((0, 1, 0, 2))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=50), min_size=2, max_size=20))
def test_convergent_recurrence_and_coprimality(tail):
    pq = PartialQuotients(tuple([0] + tail))
    t = convergents(pq)
    t.validate(pq)  # raises on any violation
    for n in range(2, len(pq)):
        assert t.q(n) == pq.a[n] * t.q(n - 1) + t.q(n - 2)
        assert math.gcd(t.p(n), t.q(n)) == 1


# ------------------------------------------------------- nearest int distance

@pytest.mark.parametrize("u,expect", [(0.4, 0.4), (0.6, 0.4), (1.25, 0.25), (-0.3, 0.3)])
def test_nearest_int_distance(u, expect):
    assert nearest_int_distance(u) == pytest.approx(expect, abs=1e-15)


def test_nearest_int_distance_exact_fraction():
    assert nearest_int_distance(Fraction(7, 12)) == Fraction(5, 12)
    assert nearest_int_distance(Fraction(1, 2)) == Fraction(1, 2)


# ---------------------------------------------------------- best approximation

def test_best_approx_golden_n4():
    t = convergents(PartialQuotients(tuple([0] + [1] * 12)))
    rep = best_approx_verify(t, "x", 4)
    assert rep.passed


def test_best_approx_all_rows_small_table():
    t = convergents(PartialQuotients((0, 2, 3, 1, 4, 2, 5)))
    for n in range(1, t.depth - 1):
        assert best_approx_verify(t, "x", n).passed


def test_best_approx_n1_seed_case():
    t = convergents(PartialQuotients((0, 7, 3, 2)))
    assert best_approx_verify(t, "x", 1).passed


def test_best_approx_corrupted_row_fails_with_witness():
    pq = PartialQuotients((0, 2, 3, 1, 4, 2, 5))
    t = convergents(pq)
    rows = list(t.rows)
    n, p, q = rows[2]
    rows[2] = (n, p, q + 1)  # q_2 <- q_2 + 1
    bad = ConvergentTable(tuple(rows))
    rep = best_approx_verify(bad, "x", 3)
    assert not rep.passed
    assert rep.witness is not None and "k" in rep.witness


def test_best_approx_capacity_error():
    t = convergents(PartialQuotients((0, 1000000, 2)))
    with pytest.raises(CapacityError) as ei:
        best_approx_verify(t, "x", 2, cap=10_000)
    assert ei.value.partial is not None


# ------------------------------------------------------------- approx bounds

def test_approx_bounds_golden():
    t = convergents(PartialQuotients(tuple([0] + [1] * 10)))
    rep = approx_bounds_verify(t, "x", 3, bits=256)
    assert rep.passed


def test_approx_bounds_all_small_rows():
    t = convergents(PartialQuotients((1, 2, 1, 3, 1, 5, 2, 2)))
    for n in range(t.depth - 1):
        assert approx_bounds_verify(t, "x", n).passed


def test_approx_bounds_last_row_precondition():
    t = convergents(PartialQuotients((0, 2, 2)))
    with pytest.raises(InvalidInputError):
        approx_bounds_verify(t, "x", t.depth)


def test_approx_bounds_swapped_p_fails():
    pq = PartialQuotients((0, 2, 3, 1, 4, 2, 5))
    t = convergents(pq)
    rows = list(t.rows)
    n2, p2, q2 = rows[2]
    n3, p3, q3 = rows[3]
    rows[2] = (n2, p3, q2)
    rows[3] = (n3, p2, q3)
    bad = ConvergentTable(tuple(rows))
    rep = approx_bounds_verify(bad, "x", 2)
    assert not rep.passed


# ----------------------------------------------------------------- real_value

def test_real_value_half():
    assert real_value(convergents(PartialQuotients((0, 2))), 64) == mpmath.mpf("0.5")


def test_real_value_golden_20_terms():
    t = convergents(PartialQuotients(tuple([0] + [1] * 20)))
    v = real_value(t, 128)
    with mpmath.workprec(160):
        ref = (mpmath.sqrt(5) - 1) / 2
        assert abs(v - ref) < 1e-8


def test_real_value_0222_exact():
    # 5/12 correctly rounded at the requested precision
    v = real_value(convergents(PartialQuotients((0, 2, 2, 2))), 64)
    with mpmath.workprec(64):
        assert v == mpmath.mpf(5) / mpmath.mpf(12)


def test_real_value_bits_validation():
    t = convergents(PartialQuotients((0, 2)))
    with pytest.raises(InvalidInputError):
        real_value(t, 32)


def test_real_value_between_consecutive_convergents():
    pq = PartialQuotients((0, 3, 1, 4, 1, 5, 9, 2))
    t = convergents(pq)
    v = real_value(t, 256)
    # outward-rounded rational envelope of the value
    sign, man, exp, _ = v._mpf_
    vf = Fraction((-1) ** sign * int(man), 1) * Fraction(2) ** int(exp)
    eps = Fraction(1, 2 ** 230)
    for n in range(t.depth - 1):
        a, b = sorted((t.fraction(n), t.fraction(n + 1)))
        assert a < vf - eps and vf + eps < b


# --------------------------------------------------------- liouville builder

def test_build_relaxed_cubic_four_levels():
    tv = build_liouville_pair(GrowthPolicy(mode="relaxed", max_level=4))
    assert len(tv.growth_report) == 8
    for entry in tv.growth_report:
        assert entry["holds"], entry
        assert entry["lhs"] >= entry["rhs"]
    # realized inequalities restated exactly from the tables
    for n in range(1, 5):
        assert tv.q("y", n) >= tv.q("x", n) ** 3
        assert tv.q("x", n + 1) >= tv.q("y", n) ** 3
    assert tv.verify_invariants()


def test_build_minimal_quotient_tiebreak():
    tv = build_liouville_pair(GrowthPolicy(mode="relaxed", max_level=2, seed_a1=3))
    # smallest a' with a'*q'_0 >= q_1^3 = 27 is 27 exactly
    assert tv.q("y", 1) == 27
    # decreasing any chosen quotient by one must break its inequality
    for entry in tv.growth_report:
        assert entry["lhs"] >= entry["rhs"]


def test_build_paper_mode_level1():
    tv = build_liouville_pair(GrowthPolicy(mode="paper", max_level=1, seed_a1=3))
    assert tv.q("y", 1) == 8104  # ceil(e^9)
    assert tv.q("x", 2) >= paper_growth(8104)


def test_paper_growth_values():
    with mpmath.workprec(128):
        assert paper_growth(3) == int(mpmath.ceil(mpmath.e ** 9))
        assert paper_growth(1) == 21  # ceil(e^3) = 21


def test_build_max_level_zero_rejected():
    with pytest.raises(InvalidInputError):
        build_liouville_pair(GrowthPolicy(max_level=0))


def test_build_paper_capacity():
    with pytest.raises(CapacityError):
        build_liouville_pair(GrowthPolicy(mode="paper", max_level=2, seed_a1=3,
                                          max_bits=200_000))


def test_best_approx_on_built_pair():
    tv = build_liouville_pair(GrowthPolicy(mode="relaxed", max_level=2))
    for axis in ("x", "y"):
        t = tv.table(axis)
        for n in range(1, t.depth):
            if t.q(n) <= 100_000:
                assert best_approx_verify(tv, axis, n).passed
