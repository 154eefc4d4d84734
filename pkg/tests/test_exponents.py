import math

import pytest
from mpmath import mp

from semiorbit.errors import DomainError
from semiorbit.exponents import (
    CutoffGF,
    c_T_bound,
    cutoff_root,
    default_delta_T,
    direct_exponent_oracle,
    explicit_constants,
    exponent_bounds,
    gap_bound,
    root_lower_bound_holds,
    suggest_delta,
)
from semiorbit.semigroup import MERSENNE_PRIMES

GOLDEN = (math.sqrt(5) - 1) / 2
LOG37 = [math.log(3), math.log(7)]


def test_cutoff_roots():
    r = cutoff_root(CutoffGF("lower", (1, 2), 3))
    assert float(r.lo) <= GOLDEN <= float(r.hi) + 1e-16
    assert r.width <= 1e-30
    r = cutoff_root(CutoffGF("lower", (2, 3), 4))
    assert float(r.mid) == pytest.approx(0.7548776662466927, abs=1e-15)


def test_tail_lowers_root():
    r = cutoff_root(CutoffGF("upper_with_tail", (1, 2), 50))
    gap = GOLDEN - float(r.hi)
    assert 0 < gap < 1e-9


def test_cutoff_rejects_single_exponent():
    with pytest.raises(DomainError):
        cutoff_root(CutoffGF("lower", (1,), 2))
    with pytest.raises(DomainError):
        CutoffGF("lower", (1, 5), 3)


def test_oracle_values():
    assert direct_exponent_oracle([2, 4]) == pytest.approx(-math.log2(GOLDEN), abs=1e-12)
    b = direct_exponent_oracle([3, 7])
    assert abs(3**-b + 7**-b - 1) < 1e-12
    assert b == pytest.approx(0.46817822893, abs=1e-10)
    assert direct_exponent_oracle([2, 3]) == pytest.approx(0.78788491102, abs=1e-10)
    assert direct_exponent_oracle(MERSENNE_PRIMES) == pytest.approx(0.60847774525, abs=1e-10)
    with pytest.raises(DomainError):
        direct_exponent_oracle([2, 2])


def test_oracle_with_tail_is_larger():
    b0, b1 = direct_exponent_oracle(MERSENNE_PRIMES, 10**26)
    assert b0 < b1 < b0 + 1e-12


@pytest.mark.parametrize("degrees", [(2, 3), (3, 7)])
def test_bracket_contains_oracle(degrees):
    br = exponent_bounds(degrees, delta=1e-3)
    assert br.b_lower <= direct_exponent_oracle(degrees) <= br.b_upper
    assert not br.tail and br.N == max(br.exponent_set.upper) + 1


def test_bracket_shrinks_toward_oracle():
    widths = [exponent_bounds((2, 3), delta=d).width for d in (1e-2, 1e-3, 1e-4)]
    assert widths[0] > widths[1] > widths[2]
    assert widths[2] < 1e-4


def test_mersenne_tail_threshold():
    br = exponent_bounds(MERSENNE_PRIMES, 10**26, delta=1e-3)
    assert br.tail and br.u == 2001
    assert br.N == math.floor(2001 * 26 * math.log(10))
    assert br.b_lower <= br.b_upper


def test_published_denominator_reproduces_endpoints():
    br = exponent_bounds(MERSENNE_PRIMES, 10**26, delta=1e-3, denominator=1000)
    assert math.floor(br.b_lower * 1e5) / 1e5 == 0.60839
    assert math.ceil(br.b_upper * 1e5) / 1e5 == 0.60872


def test_delta_too_large_rejected():
    with pytest.raises(DomainError):
        exponent_bounds([6, 7], delta=0.2)
    with pytest.raises(DomainError):
        exponent_bounds([3, 10**27], tail_bound=10**26)


def test_c_T_example():
    d = c_T_bound(LOG37, 0.5)
    assert d.e_T == pytest.approx(0.5 / math.log(3))
    assert d.e_T == pytest.approx(0.4551, abs=1e-4)
    assert d.c_T == pytest.approx(0.17654646920911, abs=1e-12)
    assert d.residual < 1e-12


def test_c_T_increases_with_delta_T():
    cs = [c_T_bound(LOG37, x).c_T for x in (0.1, 0.3, 0.5, 0.8)]
    assert cs == sorted(cs) and len(set(cs)) == 4
    with pytest.raises(DomainError):
        c_T_bound(LOG37, 0)


def test_gap_bound():
    diag = c_T_bound(LOG37, default_delta_T(LOG37))
    grid = [gap_bound(LOG37, x, diag) for x in (1e-4, 1e-3, 1e-2, 0.1, 0.3, 0.5)]
    assert grid == sorted(grid) and grid[0] < 1e-2
    br = exponent_bounds((3, 7), delta=1e-3)
    assert gap_bound(LOG37, 1e-3, diag) >= br.width
    assert root_lower_bound_holds(br, diag)
    with pytest.raises(DomainError):
        gap_bound(LOG37, 2.0, diag)


def test_suggest_delta_meets_target():
    d = suggest_delta((3, 7), 1e-3)
    diag = c_T_bound(LOG37, default_delta_T(LOG37))
    assert gap_bound(LOG37, d, diag) <= 1e-3


def test_explicit_constants():
    br = exponent_bounds(MERSENNE_PRIMES, 10**26, delta=1e-3)
    b_s = math.log(2) / 2
    lo, hi = explicit_constants(math.log(5), b_s, br)
    assert 0 < lo < hi
    lo0, _ = explicit_constants(math.log(5), b_s, br, eps_prime=0)
    assert lo0 == pytest.approx(2 * lo)
    with pytest.raises(DomainError):
        explicit_constants(0.1, b_s, br)


def test_precision_restored_after_solve():
    before = mp.dps
    exponent_bounds((2, 3), delta=1e-2, dps=80)
    assert mp.dps == before
