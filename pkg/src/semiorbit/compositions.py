"""Restricted integer compositions: exact counts and dominant-pole asymptotics."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable

from mpmath import iv, mp

from . import _interval
from .errors import AperiodicityError, DomainError


@dataclass(frozen=True)
class PartSet:
    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int]):
        ps = tuple(sorted({int(p) for p in parts}))
        if not ps or ps[0] < 1:
            raise DomainError("parts must be positive integers")
        object.__setattr__(self, "parts", ps)

    @property
    def gcd(self) -> int:
        return reduce(math.gcd, self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)


@dataclass(frozen=True)
class DominantRoot:
    alpha: float
    beta: float
    derivative_at_alpha: float
    enclosure_width: float
    alpha_lo: object = None
    alpha_hi: object = None


def _as_parts(T) -> PartSet:
    return T if isinstance(T, PartSet) else PartSet(T)


def count_table(T, n: int) -> list[int]:
    """``[a_{T,0}, ..., a_{T,n}]`` from ``a_k = sum_{t <= k} a_{k-t}``."""
    T = _as_parts(T)
    a = [0] * (n + 1)
    a[0] = 1
    for k in range(1, n + 1):
        a[k] = sum(a[k - t] for t in T.parts if t <= k)
    return a


def count_exact(T, n: int) -> int:
    if n < 0:
        raise DomainError("n must be nonnegative")
    return count_table(T, n)[n]


def count_cumulative(T, R: float) -> int:
    """Number of sequences with part sum at most ``floor(R)``, empty one included."""
    if R < 0:
        raise DomainError("R must be nonnegative")
    return sum(count_table(T, math.floor(R)))


def dominant_root(T, width: float = 1e-15, dps: int | None = None) -> DominantRoot:
    """The unique ``alpha`` in (0, 1) with ``sum_t alpha^t = 1``, by certified bisection."""
    T = _as_parts(T)
    if len(T) < 2:
        raise DomainError("dominant root needs at least two parts")
    with _interval.working_precision(dps):
        def F(z):
            x = iv.mpf(z)
            return sum(x**t for t in T.parts) - 1

        lo, hi = _interval.bisect_increasing(F, 0, 1, lambda a, b: b - a <= width)
        alpha = (lo + hi) / 2
        deriv = sum(t * alpha ** (t - 1) for t in T.parts)
        return DominantRoot(
            alpha=float(alpha),
            beta=float(1 / alpha),
            derivative_at_alpha=float(deriv),
            enclosure_width=float(hi - lo),
            alpha_lo=lo,
            alpha_hi=hi,
        )


def _require_aperiodic(T: PartSet):
    if T.gcd != 1:
        raise AperiodicityError(f"gcd of parts is {T.gcd}; the dominant pole is not unique")


def count_asymptotic(T, n: int) -> float:
    """``alpha^{-n} / (alpha G'(alpha))``."""
    T = _as_parts(T)
    _require_aperiodic(T)
    root = dominant_root(T)
    with mp.workdps(30):
        alpha = mp.mpf(root.alpha_lo + root.alpha_hi) / 2
        deriv = sum(t * alpha ** (t - 1) for t in T.parts)
        return float(alpha ** (-n) / (alpha * deriv))


@dataclass(frozen=True)
class CumulativeBounds:
    lower: float
    upper: float
    exact: int
    exact_ceil: int
    beta: float
    epsilon: float
    slack: float
    threshold: int | None


def cumulative_bounds(T, R: float, epsilon: float) -> CumulativeBounds:
    """Two-sided main terms for the cumulative count, with empirical calibration.

    ``lower = (1-eps) beta / ((beta-1) G'(1/beta)) * beta^R`` and
    ``upper = (1+eps) beta^3 / ((beta-1) G'(1/beta)) * beta^R``.  ``threshold``
    is the least integer ``R0 <= R`` such that the exact count lies between the
    main terms at every integer in ``[R0, floor(R)]`` (``None`` if it fails at
    ``R`` itself); ``slack`` is the additive term needed for containment at all
    integers ``0..floor(R)``.  ``exact_ceil`` sums up to ``ceil(R)``.
    """
    T = _as_parts(T)
    _require_aperiodic(T)
    if not 0 < epsilon < 1:
        raise DomainError("epsilon must lie in (0, 1)")
    root = dominant_root(T)
    beta = root.beta
    base = 1.0 / ((beta - 1.0) * root.derivative_at_alpha)
    lo_c = (1 - epsilon) * beta * base
    hi_c = (1 + epsilon) * beta**3 * base

    table = count_table(T, math.ceil(R))
    cums = []
    running = 0
    for a in table:
        running += a
        cums.append(running)
    fR = math.floor(R)

    threshold = None
    for k in range(fR, -1, -1):
        if not lo_c * beta**k <= cums[k] <= hi_c * beta**k:
            break
        threshold = k
    slack = 0.0
    for k in range(fR + 1):
        slack = max(slack, lo_c * beta**k - cums[k], cums[k] - hi_c * beta**k)
    return CumulativeBounds(
        lower=lo_c * beta**R,
        upper=hi_c * beta**R,
        exact=cums[fR],
        exact_ceil=cums[math.ceil(R)],
        beta=beta,
        epsilon=epsilon,
        slack=slack,
        threshold=threshold,
    )
