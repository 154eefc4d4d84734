import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from semiorbit.compositions import (
    PartSet,
    count_asymptotic,
    count_cumulative,
    count_exact,
    count_table,
    cumulative_bounds,
    dominant_root,
)
from semiorbit.errors import AperiodicityError


def brute(T, n):
    """Count sequences over T summing to n by explicit listing."""
    total = 0
    for k in range(n // min(T) + 1):
        total += sum(1 for seq in itertools.product(T, repeat=k) if sum(seq) == n)
    return total


def test_exact_examples():
    assert count_exact([1, 2], 4) == 5
    assert all(count_exact([1], n) == 1 for n in range(10))
    assert count_exact([2, 3], 7) == 3
    assert count_table([1, 2], 10)[-1] == 89
    assert count_exact([1, 2], 0) == 1


@settings(max_examples=30, deadline=None)
@given(st.sets(st.integers(1, 5), min_size=1, max_size=3), st.integers(0, 12))
def test_exact_matches_brute_force(T, n):
    assert count_exact(sorted(T), n) == brute(sorted(T), n)


def test_cumulative_examples():
    assert count_cumulative([1, 2], 4) == 12
    assert count_cumulative([2, 3], 7) == 11
    assert count_cumulative([4, 9], 0) == 1
    assert count_cumulative([1, 2], 4.7) == 12


def test_dominant_roots():
    assert dominant_root([1, 2]).alpha == pytest.approx((math.sqrt(5) - 1) / 2, abs=1e-14)
    assert dominant_root([1, 2, 3]).alpha == pytest.approx(0.5436890126920764, abs=1e-13)
    r = dominant_root([2, 3])
    assert r.alpha == pytest.approx(0.7548776662466927, abs=1e-13)
    assert abs(r.alpha**2 + r.alpha**3 - 1) < 1e-12
    assert r.alpha_lo <= r.alpha <= r.alpha_hi
    assert dominant_root([1, 2]).beta == pytest.approx((1 + math.sqrt(5)) / 2)


def test_adding_a_part_lowers_alpha():
    assert dominant_root([1, 2, 3]).alpha < dominant_root([1, 2]).alpha
    assert dominant_root([2, 3, 7]).alpha < dominant_root([2, 3]).alpha


def test_asymptotic():
    assert count_asymptotic([1, 2], 10) == pytest.approx(89, abs=0.01)
    assert count_asymptotic([1, 2], 20) == pytest.approx(10946, abs=0.01)
    assert count_asymptotic([2, 3], 30) == pytest.approx(count_exact([2, 3], 30), rel=0.01)
    with pytest.raises(AperiodicityError):
        count_asymptotic([2, 4], 10)


def test_cumulative_bounds_contain_exact():
    b = cumulative_bounds([1, 2], 30, 0.1)
    assert b.lower <= b.exact <= b.upper
    assert b.exact == count_cumulative([1, 2], 30)
    b = cumulative_bounds([2, 3], 40, 0.5)
    assert b.lower <= b.exact <= b.upper
    assert b.beta == pytest.approx(1 / 0.7548776662466927)
    with pytest.raises(AperiodicityError):
        cumulative_bounds([2, 4], 10, 0.5)


def test_partset_gcd():
    assert PartSet([6, 4, 4]).parts == (4, 6) and PartSet([6, 4]).gcd == 2
