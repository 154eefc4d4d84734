"""Common-denominator rational sandwiches for log-degrees.

For each degree ``d`` with ``t = log d`` we pick integers ``n_t < m_t`` and a
shared denominator ``u`` with

    t - delta < n_t/u < t < m_t/u < t + delta,

and both ``gcd(n_t)`` and ``gcd(m_t)`` equal to 1.  The base choice is
``n_t = floor(u t)``, ``m_t = n_t + 1``; if a gcd is not 1 the two smallest
elements are used to deform the integers as described in ``_deform``.
Floors are certified with interval arithmetic (``log d`` is irrational for
integers ``d >= 2``, so a large enough precision always separates ``u t``
from the integers).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

from mpmath import iv, mp

from . import _interval
from .errors import DomainError, PrecisionError

MAX_DEFORMATION_POWER = 64


@dataclass(frozen=True)
class ApproximationRequest:
    degrees: tuple[int, ...]
    delta: float

    def __post_init__(self):
        ds = tuple(int(d) for d in self.degrees)
        object.__setattr__(self, "degrees", ds)
        if self.delta <= 0:
            raise DomainError("delta must be positive")
        if len(ds) < 2:
            raise DomainError("need at least two degrees")
        if min(ds) < 2:
            raise DomainError("degrees must be >= 2")
        if len(set(ds)) != len(ds):
            raise DomainError("degrees must be pairwise distinct")


@dataclass(frozen=True)
class ExponentSet:
    """Integers ``n_t``, ``m_t`` over a shared denominator ``u``, keyed by degree."""

    u: int
    keys: tuple[int, ...]
    lower: tuple[int, ...]
    upper: tuple[int, ...]
    deformation_power: int = 0

    @property
    def deformed(self) -> bool:
        return self.deformation_power > 0

    @property
    def injective(self) -> bool:
        return len(set(self.lower)) == len(self.lower) and len(set(self.upper)) == len(self.upper)

    def lower_of(self, degree: int) -> int:
        return self.lower[self.keys.index(degree)]

    def upper_of(self, degree: int) -> int:
        return self.upper[self.keys.index(degree)]

    def to_json(self) -> str:
        return json.dumps(
            {
                "u": str(self.u),
                "degrees": [str(k) for k in self.keys],
                "lower": [str(n) for n in self.lower],
                "upper": [str(m) for m in self.upper],
                "deformation_power": self.deformation_power,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "ExponentSet":
        doc = json.loads(text)
        return cls(
            u=int(doc["u"]),
            keys=tuple(int(k) for k in doc["degrees"]),
            lower=tuple(int(n) for n in doc["lower"]),
            upper=tuple(int(m) for m in doc["upper"]),
            deformation_power=int(doc.get("deformation_power", 0)),
        )


def exact_delta(delta) -> Fraction:
    """Read ``delta`` as the decimal it prints as (``0.01`` means 1/100)."""
    if isinstance(delta, float):
        return Fraction(repr(delta))
    return Fraction(delta)


def base_denominator(delta) -> int:
    """Smallest integer strictly greater than ``2/delta``."""
    return math.floor(2 / exact_delta(delta)) + 1


def _log_interval(d: int):
    return iv.log(iv.mpf(d))


def _certified_floor(d: int, u: int, dps: int) -> int:
    for extra in (0, 40, 200, 1000):
        with _interval.working_precision(dps + extra):
            x = _log_interval(d) * u
            a, b = _interval.lo(x), _interval.hi(x)
            fa, fb = int(mp.floor(a)), int(mp.floor(b))
            if fa == fb:
                return fa
    raise PrecisionError(f"could not certify floor(u log {d}) with u = {u}")


def _deform(degrees, n, m, u, delta, dps):
    """Repair the gcd conditions using the two smallest elements.

    With ``v = (n_{t2} m_{t2})^r``: ``n'_{t1} = n_{t1} v + 1``,
    ``m'_{t1} = m_{t1} v + 1``, every other exponent is multiplied by ``v``
    and ``u' = u v``.  Any prime dividing ``n'_{t2}`` divides ``v``, hence
    cannot divide ``n'_{t1}``.  ``r`` is the least power keeping the strict
    sandwich at ``t1``, i.e. ``1/(u v)`` below both slacks there.
    """
    order = sorted(range(len(degrees)), key=lambda i: degrees[i])
    i1, i2 = order[0], order[1]
    base = n[i2] * m[i2]
    with _interval.working_precision(dps):
        t1 = _log_interval(degrees[i1])
        slack_n = t1 - iv.mpf(n[i1]) / u
        fd = exact_delta(delta)
        slack_m = t1 + iv.mpf(fd.numerator) / fd.denominator - iv.mpf(m[i1]) / u
        for r in range(1, MAX_DEFORMATION_POWER + 1):
            v = base**r
            step = iv.mpf(1) / (iv.mpf(u) * v)
            if (step < slack_n) is True and (step < slack_m) is True:
                break
        else:
            raise PrecisionError("no deformation power keeps the sandwich strict")
    n2 = [x * v for x in n]
    m2 = [x * v for x in m]
    n2[i1] += 1
    m2[i1] += 1
    return n2, m2, u * v, r


def approximate(degrees: Sequence[int], delta: float, *, denominator: int | None = None,
                dps: int | None = None) -> ExponentSet:
    """Sandwich each ``log d`` between ``n/u`` and ``m/u``.

    ``denominator`` overrides the base choice of ``u``; it must satisfy
    ``u * delta >= 1`` so that the floor sandwich fits inside ``delta``.
    """
    req = ApproximationRequest(tuple(degrees), delta)
    dps = _interval.default_dps() if dps is None else dps
    if denominator is None:
        u = base_denominator(delta)
    else:
        u = int(denominator)
        if u * exact_delta(delta) < 1:
            raise DomainError(f"denominator {u} is too small for delta = {delta}")
    n = [_certified_floor(d, u, dps) for d in req.degrees]
    m = [x + 1 for x in n]
    r = 0
    if reduce(math.gcd, n) != 1 or reduce(math.gcd, m) != 1:
        n, m, u, r = _deform(req.degrees, n, m, u, delta, dps)
    return ExponentSet(u=u, keys=req.degrees, lower=tuple(n), upper=tuple(m), deformation_power=r)


@dataclass(frozen=True)
class Verification:
    ok: bool
    sandwich: bool
    gcd: bool
    injective: bool
    violation: str | None = None


def verify_approximation(degrees: Sequence[int], delta: float, E: ExponentSet,
                         dps: int | None = None) -> Verification:
    """Re-check the sandwich and gcd conditions independently of ``approximate``.

    Uses a fresh interval evaluation of each ``log d`` at extra precision; an
    inequality that cannot be decided counts as a violation.
    """
    dps = (_interval.default_dps() if dps is None else dps) + 30
    violation = None
    sandwich = True
    fd = exact_delta(delta)
    with _interval.working_precision(dps):
        dlt = iv.mpf(fd.numerator) / fd.denominator
        for d in degrees:
            t = _log_interval(d)
            n, m = E.lower_of(d), E.upper_of(d)
            lo, hi = iv.mpf(n) / E.u, iv.mpf(m) / E.u
            checks = [
                (lo > t - dlt, f"n/u > t - delta fails for d={d}"),
                (lo < t, f"n/u < t fails for d={d}"),
                (hi > t, f"m/u > t fails for d={d}"),
                (hi < t + dlt, f"m/u < t + delta fails for d={d}"),
            ]
            for holds, msg in checks:
                if holds is not True:
                    sandwich = False
                    violation = violation or msg
    g_n, g_m = reduce(math.gcd, E.lower), reduce(math.gcd, E.upper)
    gcd_ok = g_n == 1 and g_m == 1
    if not gcd_ok:
        violation = violation or f"gcd(n) = {g_n}, gcd(m) = {g_m}"
    return Verification(
        ok=sandwich and gcd_ok,
        sandwich=sandwich,
        gcd=gcd_ok,
        injective=E.injective,
        violation=violation,
    )
