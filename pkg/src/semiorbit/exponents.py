"""Two-sided growth exponents from truncated generating functions.

Given degrees ``d`` with ``t = log d`` and a sandwich ``n_t/u < t < m_t/u``,
the lower cutoff ``G2(z) = sum z^{m_t}`` and the upper cutoff
``G1(z) = sum z^{n_t} (+ z^N/(1-z))`` are strictly increasing on (0, 1) with
``G2 < G1``, so their roots satisfy ``alpha1 <= alpha2``.  The exponent
bracket is ``u log(1/alpha2) <= b <= u log(1/alpha1)``.

All root enclosures are certified with interval arithmetic; every term is
evaluated as ``exp(n log z)`` so exponents in the millions stay well
conditioned.  Reported endpoints are rounded outward to floats.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

from mpmath import iv, mp

from . import _interval
from .approximation import ExponentSet, approximate
from .errors import DomainError, PrecisionError
from .heights import parse_big_int
from .semigroup import min_log_gap

DEFAULT_EPS_PRIME = 0.5


@dataclass(frozen=True)
class CutoffGF:
    """``sum_{n in exponents, n <= N} z^n``, plus ``z^N/(1-z)`` when ``tail``."""

    kind: str
    exponents: tuple[int, ...]
    N: int
    tail: bool = False

    def __post_init__(self):
        if self.kind not in ("upper_with_tail", "upper", "lower"):
            raise DomainError(f"unknown cutoff kind {self.kind!r}")
        exps = tuple(sorted(int(e) for e in self.exponents))
        if not exps or exps[0] < 1:
            raise DomainError("exponents must be positive")
        if exps[-1] > self.N:
            raise DomainError("all exponents must be <= N")
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "tail", self.kind == "upper_with_tail")

    def interval_value(self, z):
        """Interval enclosure of ``G(z)`` at the point ``z`` in (0, 1)."""
        x = iv.mpf(z)
        lz = iv.log(x)
        total = iv.mpf(0)
        for n in self.exponents:
            total += iv.exp(lz * n)
        if self.tail:
            total += iv.exp(lz * self.N) / (1 - x)
        return total

    def value(self, z):
        z = mp.mpf(z)
        total = mp.fsum(mp.exp(n * mp.log(z)) for n in self.exponents)
        if self.tail:
            total += mp.exp(self.N * mp.log(z)) / (1 - z)
        return total

    def derivative(self, z):
        z = mp.mpf(z)
        lz = mp.log(z)
        total = mp.fsum(n * mp.exp((n - 1) * lz) for n in self.exponents)
        if self.tail:
            zN = mp.exp(self.N * lz)
            total += self.N * zN / (z * (1 - z)) + zN / (1 - z) ** 2
        return total


@dataclass(frozen=True)
class RootEnclosure:
    lo: object
    hi: object
    residual: float
    derivative: float

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return (self.lo + self.hi) / 2


def _solve(G: CutoffGF, done) -> RootEnclosure:
    if not G.tail and len(G.exponents) < 2:
        raise DomainError("a cutoff without tail needs at least two exponents to reach 1 on (0, 1)")
    lo, hi = _interval.bisect_increasing(lambda z: G.interval_value(z) - 1, 0, 1, done)
    mid = (lo + hi) / 2
    return RootEnclosure(lo, hi, float(abs(G.value(mid) - 1)), float(G.derivative(mid)))


def cutoff_root(G: CutoffGF, precision: float = 1e-30, dps: int | None = None) -> RootEnclosure:
    """Certified enclosure of the root of ``G(z) = 1`` in (0, 1), width <= ``precision``."""
    with _interval.working_precision(dps):
        return _solve(G, lambda a, b: b - a <= precision)


def _exponent_width_done(u: int, precision: float):
    def done(a, b):
        return a > 0 and u * (mp.log(b) - mp.log(a)) <= precision
    return done


@dataclass(frozen=True)
class ExponentBracket:
    """``b_lower <= b <= b_upper`` with solver metadata.

    ``alpha_lower`` encloses the root of the lower cutoff (it yields
    ``b_lower``); ``alpha_upper`` encloses the root of the upper cutoff.
    """

    b_lower: float
    b_upper: float
    alpha_lower: tuple[str, str]
    alpha_upper: tuple[str, str]
    u: int
    delta: float
    N: int
    tail: bool
    tail_bound: int | None
    derivative_lower: float
    derivative_upper: float
    residual_lower: float
    residual_upper: float
    exponent_set: ExponentSet = field(repr=False, compare=False)
    dps: int = 0

    @property
    def width(self) -> float:
        return self.b_upper - self.b_lower

    def alpha_lower_mid(self):
        return (mp.mpf(self.alpha_lower[0]) + mp.mpf(self.alpha_lower[1])) / 2

    def alpha_upper_mid(self):
        return (mp.mpf(self.alpha_upper[0]) + mp.mpf(self.alpha_upper[1])) / 2

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("exponent_set")
        d["u"] = str(self.u)
        d["N"] = str(self.N)
        d["tail_bound"] = None if self.tail_bound is None else str(self.tail_bound)
        d["alpha_lower"] = list(self.alpha_lower)
        d["alpha_upper"] = list(self.alpha_upper)
        d["deformation_power"] = self.exponent_set.deformation_power
        return d


def _check_degrees(degrees: Sequence[int]) -> list[int]:
    ds = [parse_big_int(d) if isinstance(d, str) else int(d) for d in degrees]
    if any(d < 2 for d in ds):
        raise DomainError("degrees must be >= 2")
    if len(set(ds)) != len(ds):
        raise DomainError("degrees must be pairwise distinct")
    return ds


def exponent_bounds(degrees: Sequence[int], tail_bound: int | None = None, delta: float = 1e-5,
                    precision: float = 1e-12, *, denominator: int | None = None,
                    dps: int | None = None) -> ExponentBracket:
    """Certified bracket for the orbit-growth exponent of the degree set.

    ``precision`` bounds the width of each endpoint's enclosure in exponent
    units.  With ``tail_bound`` every unknown degree ``>= tail_bound`` is
    covered by the geometric tail starting at ``N = floor(u log tail_bound)``.
    """
    ds = _check_degrees(degrees)
    if len(ds) < 2:
        raise DomainError("need at least two degrees")
    if delta >= min_log_gap(ds):
        raise DomainError(
            f"delta = {delta} is not below the minimum log gap {min_log_gap(ds):.6g}; "
            "the exponent maps would not be injective"
        )
    if tail_bound is not None and max(ds) >= tail_bound:
        raise DomainError("every listed degree must be below the tail bound")
    dps = _interval.default_dps() if dps is None else dps

    E = approximate(ds, delta, denominator=denominator, dps=dps)
    if not E.injective:
        raise DomainError("exponent maps are not injective at this delta")
    u = E.u
    with _interval.working_precision(dps):
        if tail_bound is not None:
            x = iv.log(iv.mpf(tail_bound)) * u
            N = int(mp.floor(_interval.lo(x)))
            if int(mp.floor(_interval.hi(x))) != N:
                raise PrecisionError("cannot certify the tail threshold; increase precision")
            upper = CutoffGF("upper_with_tail", tuple(n for n in E.lower if n <= N), N)
            lower = CutoffGF("lower", tuple(m for m in E.upper if m <= N), N)
        else:
            N = max(E.upper) + 1
            upper = CutoffGF("upper", E.lower, N)
            lower = CutoffGF("lower", E.upper, N)

        done = _exponent_width_done(u, precision)
        r1 = _solve(upper, done)
        r2 = _solve(lower, done)
        # alpha_{1,N} <= alpha_{2,N}: the upper cutoff dominates pointwise.
        if not r1.lo <= r2.hi:
            raise ArithmeticError("root ordering of the cutoff functions violated")
        b_lo = -iv.log(iv.mpf(r2.hi)) * u
        b_hi = -iv.log(iv.mpf(r1.lo)) * u
        bracket = ExponentBracket(
            b_lower=_interval.float_down(b_lo),
            b_upper=_interval.float_up(b_hi),
            alpha_lower=(mp.nstr(r2.lo, dps), mp.nstr(r2.hi, dps)),
            alpha_upper=(mp.nstr(r1.lo, dps), mp.nstr(r1.hi, dps)),
            u=u,
            delta=float(delta),
            N=N,
            tail=tail_bound is not None,
            tail_bound=tail_bound,
            derivative_lower=r2.derivative,
            derivative_upper=r1.derivative,
            residual_lower=r2.residual,
            residual_upper=r1.residual,
            exponent_set=E,
            dps=dps,
        )
    return bracket


# -- independent oracle ----------------------------------------------------


def _oracle_bisect(f, hi, tol):
    lo = mp.mpf(0)
    hi = mp.mpf(hi)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def direct_exponent_oracle(degrees: Sequence[int], tail_bound: int | None = None,
                           tail_spacing: float | None = None, tol: float = 1e-13):
    """Solve ``sum_d d^{-b} = 1`` by bisection on the decreasing map in ``b``.

    Without ``tail_bound`` this returns a float.  With it, returns
    ``(b_known, b_tail)``: ``b_tail`` additionally counts a hypothetical
    continuation of degrees ``tail_bound * rho^k`` (``rho = e^spacing``,
    ``k >= 0``), the worst case for any degree set beyond ``tail_bound``
    whose log gaps are at least ``tail_spacing`` (default: the listed set's
    own minimum log gap).
    """
    ds = _check_degrees(degrees)
    if len(ds) < 2:
        raise DomainError("the oracle equation needs at least two degrees")
    hi = math.log2(len(ds)) + 2
    with mp.workdps(50):
        logs = [mp.log(d) for d in ds]

        def known(b):
            return mp.fsum(mp.exp(-b * t) for t in logs) - 1

        b0 = _oracle_bisect(known, hi, tol)
        if tail_bound is None:
            return float(b0)
        spacing = min_log_gap(ds) if tail_spacing is None else tail_spacing
        lt = mp.log(tail_bound)

        def with_tail(b):
            return known(b) + mp.exp(-b * lt) / (1 - mp.exp(-b * spacing))

        b1 = _oracle_bisect(with_tail, hi + 1, tol)
        return float(b0), float(b1)


# -- diagnostics -----------------------------------------------------------


@dataclass(frozen=True)
class DiagnosticConstants:
    t1: float
    delta_T: float
    e_T: float
    c_T: float
    residual: float


def default_delta_T(T: Sequence[float]) -> float:
    """A valid discreteness constant: 0.999 times the least gap of ``T``."""
    ts = sorted(float(t) for t in T)
    return 0.999 * min(b - a for a, b in zip(ts, ts[1:]))


def c_T_bound(T: Sequence, delta_T: float) -> DiagnosticConstants:
    """Solve ``z + z/(1 - z^{e_T}) = 1/2`` on (0, 1), ``e_T = delta_T / min(T)``."""
    if delta_T <= 0:
        raise DomainError("delta_T must be positive")
    with mp.workdps(50):
        ts = sorted(mp.mpf(t) for t in T)
        if ts[0] <= 0:
            raise DomainError("T must be positive")
        if any(b - a <= delta_T for a, b in zip(ts, ts[1:])):
            raise DomainError("T is not uniformly discrete with this delta_T")
        t1 = ts[0]
        e = mp.mpf(delta_T) / t1

        def g(z):
            return z + z / (1 - z**e)

        lo, hi = mp.mpf(0), mp.mpf(1)
        while hi - lo > mp.mpf(10) ** -40:
            mid = (lo + hi) / 2
            if g(mid) < mp.mpf(1) / 2:
                lo = mid
            else:
                hi = mid
        c = (lo + hi) / 2
        return DiagnosticConstants(
            t1=float(t1),
            delta_T=float(delta_T),
            e_T=float(e),
            c_T=float(c),
            residual=float(abs(g(c) - mp.mpf(1) / 2)),
        )


def gap_bound(T: Sequence, delta: float, diag: DiagnosticConstants) -> float:
    """Closed-form bound on ``b_upper - b_lower`` for a tail-free finite set."""
    t1 = diag.t1
    if not 0 < delta < min(diag.delta_T, t1):
        raise DomainError("need 0 < delta < min(delta_T, t1)")
    with mp.workdps(50):
        c = mp.mpf(diag.c_T)
        t1 = mp.mpf(t1)
        d = mp.mpf(delta)
        num = -mp.expm1(2 * d / (t1 - d) * mp.log(c))
        den = c ** ((t1 + d) / (t1 - d))
        return float(num / den / (c * t1))


def root_lower_bound_holds(bracket: ExponentBracket, diag: DiagnosticConstants) -> bool:
    """``alpha_upper ** n_{t1} >= c_T`` with ``t1`` the least log-degree."""
    E = bracket.exponent_set
    n1 = E.lower_of(min(E.keys))
    with mp.workdps(max(bracket.dps, 30)):
        alpha = mp.mpf(bracket.alpha_upper[0])
        return bool(alpha**n1 >= diag.c_T)


def suggest_delta(degrees: Sequence[int], target_width: float, delta_T: float | None = None) -> float:
    """Largest ``delta`` (to 1%) whose gap bound is below ``target_width``."""
    ds = _check_degrees(degrees)
    T = [math.log(d) for d in ds]
    delta_T = default_delta_T(T) if delta_T is None else delta_T
    diag = c_T_bound(T, delta_T)
    lo, hi = 0.0, min(delta_T, diag.t1) * (1 - 1e-9)
    if gap_bound(T, hi, diag) <= target_width:
        return hi
    while hi - lo > 0.01 * hi:
        mid = (lo + hi) / 2
        if gap_bound(T, mid, diag) <= target_width:
            lo = mid
        else:
            hi = mid
    return lo


def explicit_constants(h_P: float, b_S: float, bracket: ExponentBracket,
                       eps_prime: float = DEFAULT_EPS_PRIME) -> tuple[float, float]:
    """Leading constants ``(C_lower, C_upper)`` of the two-sided count."""
    if h_P <= b_S:
        raise DomainError("h(P) must exceed b_S")
    if not 0 <= eps_prime < 1:
        raise DomainError("eps_prime must lie in [0, 1)")
    with mp.workdps(max(bracket.dps, 30)):
        a2, a1 = bracket.alpha_lower_mid(), bracket.alpha_upper_mid()
        beta2, beta1 = 1 / a2, 1 / a1
        u = bracket.u
        c_lower = (1 - eps_prime) * beta2 / (
            (beta2 - 1) * bracket.derivative_lower * mp.power(h_P + b_S, u * mp.log(beta2))
        )
        c_upper = (1 + eps_prime) * beta1**3 / (
            (beta1 - 1) * bracket.derivative_upper * mp.power(h_P - b_S, u * mp.log(beta1))
        )
        return float(c_lower), float(c_upper)
