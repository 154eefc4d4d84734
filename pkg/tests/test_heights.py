import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from semiorbit.heights import (
    INFINITY,
    as_point,
    format_point,
    height_exceeds_threshold,
    log_int,
    multiplicative_height_leq,
    parse_big_int,
    weil_height,
)


@pytest.mark.parametrize("q, H", [(5, 5), ("3/2", 3), ("-7/10", 10), (0, 1), ("6/4", 3)])
def test_weil_height_exact_max(q, H):
    assert weil_height(q).exact_max == H


def test_log_height_of_five():
    assert weil_height(5).log_height == pytest.approx(math.log(5), rel=1e-12)


def test_leq_boundary():
    assert multiplicative_height_leq(126, 126)
    assert not multiplicative_height_leq(126, 125)
    assert not multiplicative_height_leq(Fraction(3, 2), 2)


def test_threshold():
    assert height_exceeds_threshold(5)
    assert not height_exceeds_threshold(2)
    assert height_exceeds_threshold("9/2")
    assert not height_exceeds_threshold(4)


def test_bad_bound_rejected():
    with pytest.raises(ValueError):
        multiplicative_height_leq(1, 0)


def test_infinity_is_not_a_point():
    with pytest.raises(ValueError):
        as_point(INFINITY)


def test_parse_big_int_shorthand_is_exact():
    assert parse_big_int("1e26") == 10**26
    assert parse_big_int("2305843009213693951") == 2**61 - 1
    with pytest.raises(ValueError):
        parse_big_int("1.5")


def test_log_int_huge():
    n = 10**500
    assert log_int(n) == pytest.approx(500 * math.log(10), rel=1e-14)


@given(st.integers(-10**30, 10**30), st.integers(1, 10**30))
def test_height_is_max_of_reduced_parts(a, b):
    q = Fraction(a, b)
    hv = weil_height(q)
    assert hv.exact_max == max(abs(q.numerator), q.denominator)
    assert as_point(format_point(q)) == q
