"""Working-precision control and rigorous bisection on top of ``mpmath.iv``."""
from __future__ import annotations

import contextlib
import os

from mpmath import iv, mp
from mpmath.libmp import round_ceiling, round_floor, to_float

from .errors import PrecisionError

DEFAULT_DPS = 60
DPS_ENV = "SEMIORBIT_DPS"


def default_dps() -> int:
    env = os.environ.get(DPS_ENV)
    return int(env) if env else DEFAULT_DPS


@contextlib.contextmanager
def working_precision(dps: int | None = None):
    # mpmath contexts are process-global; not safe to interleave across threads.
    dps = default_dps() if dps is None else dps
    old_mp, old_iv = mp.prec, iv.prec
    mp.dps = dps
    iv.dps = dps
    try:
        yield dps
    finally:
        mp.prec, iv.prec = old_mp, old_iv


def lo(x):
    return mp.make_mpf(x._mpi_[0])


def hi(x):
    return mp.make_mpf(x._mpi_[1])


def float_down(x) -> float:
    """Largest float not exceeding the interval (or mpf) ``x``."""
    raw = x._mpi_[0] if hasattr(x, "_mpi_") else x._mpf_
    return to_float(raw, rnd=round_floor)


def float_up(x) -> float:
    raw = x._mpi_[1] if hasattr(x, "_mpi_") else x._mpf_
    return to_float(raw, rnd=round_ceiling)


def bisect_increasing(F, a, b, done, max_steps: int = 10_000):
    """Enclose the unique sign change of an increasing function on ``(a, b)``.

    ``F(z)`` must return an interval containing the true value at the point
    ``z``; the caller guarantees ``F < 0`` near ``a`` and ``F > 0`` near ``b``.
    Bisection continues until ``done(lo, hi)`` is true.  Returns ``(lo, hi)``
    as mpf values with ``F(lo) < 0 < F(hi)`` certified (or endpoints).
    """
    a, b = mp.mpf(a), mp.mpf(b)
    for _ in range(max_steps):
        if done(a, b):
            return a, b
        mid = (a + b) / 2
        if mid <= a or mid >= b:
            break
        y = F(mid)
        if y > 0:
            b = mid
        elif y < 0:
            a = mid
        else:
            break
    raise PrecisionError(
        f"root enclosure stalled at width {mp.nstr(b - a, 5)} with "
        f"{mp.dps} working digits; increase the working precision"
    )
