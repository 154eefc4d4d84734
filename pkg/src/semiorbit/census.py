"""Exact enumeration of orbit points of bounded height.

Words are visited in order of (degree, index tuple) from a heap, so a run is
fully deterministic.  Two pruning regimes are supported:

* exact: every generator is ``+-z^d +- 1`` and ``H(P) > 4``.  Heights then
  strictly increase along every word, so a branch is cut as soon as its point
  exceeds the bound.
* telescoping: any shared-constant set with ``h(P) > b_S``.  A branch is cut
  once ``d_S * deg(f) * (h(P) - b_S)`` exceeds ``log B``, which bounds the
  height of every extension from below.
"""
from __future__ import annotations

import heapq
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np
from mpmath import mp

from .errors import DomainError, PreconditionError, ResourceError
from .heights import (
    HeightValue,
    as_point,
    format_point,
    log_int,
    multiplicative_height,
    parse_big_int,
)
from .semigroup import GeneratorSet, Word

DEFAULT_MAX_ENTRIES = 10**6


@dataclass
class CensusEntry:
    point: Fraction
    exact_max: int
    multiplicity: int
    shortest_word: tuple[int, ...]

    @property
    def height(self) -> HeightValue:
        return HeightValue(log_int(self.exact_max), self.exact_max)

    def to_dict(self) -> dict:
        return {
            "point": format_point(self.point),
            "exact_max": str(self.exact_max),
            "multiplicity": self.multiplicity,
            "shortest_word": list(self.shortest_word),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CensusEntry":
        return cls(as_point(d["point"]), int(d["exact_max"]), int(d["multiplicity"]),
                   tuple(d["shortest_word"]))


@dataclass
class Census:
    base_point: Fraction
    bound: int
    entries: list[CensusEntry] = field(default_factory=list)
    function_count: int = 0
    partial: bool = False

    @property
    def point_count(self) -> int:
        return len(self.entries)

    def restrict(self, bound: int) -> "Census":
        """The census at a smaller bound (valid since paths are height-monotone)."""
        if bound > self.bound:
            raise DomainError("can only restrict to a smaller bound")
        kept = [e for e in self.entries if e.exact_max <= bound]
        return Census(self.base_point, bound, kept, sum(e.multiplicity for e in kept), self.partial)

    def dumps(self) -> str:
        """JSON-lines text: a ``meta`` header, then one entry per line."""
        meta = {
            "meta": {
                "base_point": format_point(self.base_point),
                "bound": str(self.bound),
                "function_count": str(self.function_count),
                "point_count": self.point_count,
                "partial": self.partial,
            }
        }
        lines = [json.dumps(meta, sort_keys=True)]
        lines += [json.dumps(e.to_dict(), sort_keys=True) for e in self.entries]
        return "\n".join(lines) + "\n"

    def dump(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def loads(cls, text: str) -> "Census":
        rows = [json.loads(line) for line in text.splitlines() if line.strip()]
        meta = rows[0]["meta"]
        entries = [CensusEntry.from_dict(r) for r in rows[1:]]
        return cls(as_point(meta["base_point"]), int(meta["bound"]), entries,
                   int(meta["function_count"]), bool(meta["partial"]))

    @classmethod
    def load(cls, path) -> "Census":
        return cls.loads(Path(path).read_text())


def _exact_pruning_ok(S: GeneratorSet, P: Fraction) -> bool:
    unit_coeffs = all(abs(g.leading) == 1 and abs(g.constant) == 1 for g in S.generators)
    return unit_coeffs and multiplicative_height(P) > 4


def iter_words(S: GeneratorSet, P, B: int) -> Iterator[tuple[Word, Fraction, Fraction | None]]:
    """Yield ``(word, f(P), parent value)`` for every word with ``H(f(P)) <= B``.

    Words come out ordered by degree, then index tuple.  The parent value is
    the point the outermost letter was applied to (``None`` for the identity).
    """
    P = as_point(P)
    B = int(B)
    if B < 1:
        raise DomainError("height bound must be at least 1")
    if _exact_pruning_ok(S, P):
        def expand(word, value):
            return multiplicative_height(value) <= B
    else:
        if S.shared_constant is None:
            raise PreconditionError("telescoping pruning needs a shared constant term")
        tc = S.telescoping_constants()
        h_p = log_int(multiplicative_height(P))
        if h_p <= tc.b_S:
            raise PreconditionError(
                f"h(P) = {h_p:.6g} must exceed b_S = {tc.b_S:.6g} (or use c = 1 with H(P) > 4)"
            )
        log_b = math.log(B) if B < 2**1000 else log_int(B)
        margin = tc.d_S * (h_p - tc.b_S)

        def expand(word, value):
            return word.degree * margin <= log_b * (1 + 1e-12) + 1e-9

    heap: list = [(1, (), P, None)]
    while heap:
        degree, idx, value, parent = heapq.heappop(heap)
        word = Word(idx, degree)
        if multiplicative_height(value) <= B:
            yield word, value, parent
        if expand(word, value):
            for j, g in enumerate(S.generators):
                heapq.heappush(heap, (degree * g.degree, (j,) + idx, g(value), value))


def enumerate_orbit(S: GeneratorSet, P, B, max_entries: int = DEFAULT_MAX_ENTRIES) -> Census:
    """All orbit points of height at most ``B`` with word multiplicities."""
    P = as_point(P)
    B = parse_big_int(B) if isinstance(B, str) else int(B)
    census = Census(P, B)
    index: dict[tuple[int, int], CensusEntry] = {}
    for word, value, _ in iter_words(S, P, B):
        key = (value.numerator, value.denominator)
        census.function_count += 1
        entry = index.get(key)
        if entry is None:
            entry = CensusEntry(value, multiplicative_height(value), 1, word.indices)
            index[key] = entry
            census.entries.append(entry)
            if len(census.entries) > max_entries:
                census.partial = True
                raise ResourceError(f"census exceeded {max_entries} entries", partial=census)
        else:
            entry.multiplicity += 1
            if len(word.indices) < len(entry.shortest_word):
                entry.shortest_word = word.indices
    return census


def function_count_bounded(S: GeneratorSet, P, B) -> int:
    return enumerate_orbit(S, P, B).function_count


@dataclass(frozen=True)
class CollisionReport:
    max_multiplicity: int
    histogram: dict[int, int]


def collision_report(census: Census) -> CollisionReport:
    hist = Counter(e.multiplicity for e in census.entries)
    return CollisionReport(max(hist) if hist else 0, dict(sorted(hist.items())))


# -- word-degree counting ---------------------------------------------------


def count_words_by_degree(degrees: Sequence[int], R: float) -> int:
    """Number of words (identity included) with ``log deg <= R``, by listing them."""
    if R < 0:
        return 0
    with mp.workdps(50):
        cap = int(mp.floor(mp.exp(mp.mpf(R))))
    count = 0
    stack = [1]
    while stack:
        d = stack.pop()
        count += 1
        for e in degrees:
            if d * e <= cap:
                stack.append(d * e)
    return count


@dataclass(frozen=True)
class SandwichCounts:
    lower: int
    upper: int
    R_lower: float
    R_upper: float


def degree_sandwich(S: GeneratorSet, P, B: int) -> SandwichCounts:
    """Word counts bracketing ``#{f : H(f(P)) <= B}`` via the telescoping bound.

    ``R = log(log B / (h(P) +- b_S))``.
    """
    P = as_point(P)
    tc = S.telescoping_constants()
    h_p = log_int(multiplicative_height(P))
    if h_p <= tc.b_S:
        raise PreconditionError("h(P) must exceed b_S")
    log_b = log_int(int(B))
    r_lo = math.log(log_b / (h_p + tc.b_S))
    r_hi = math.log(log_b / (h_p - tc.b_S))
    return SandwichCounts(
        count_words_by_degree(S.degrees, r_lo),
        count_words_by_degree(S.degrees, r_hi),
        r_lo,
        r_hi,
    )


# -- invariant checks -----------------------------------------------------


def height_invariant_violations(S: GeneratorSet, P, B: int, slack: float = 1e-9) -> list[str]:
    """Check the per-step and telescoping height bounds on every word up to ``B``.

    Per step: ``|h(g(Q)) - d h(Q)| <= h(c) + log 2``.  Whole word:
    ``deg(f)(h(P) - b_S) <= h(f(P)) <= deg(f)(h(P) + b_S)``.  Logs are taken at
    50 digits; returns human-readable descriptions of any violations.
    """
    P = as_point(P)
    out = []
    with mp.workdps(50):
        def h(q):
            return mp.log(multiplicative_height(q))

        h_p = h(P)
        c_s = max(h(g.constant) for g in S.generators) + mp.log(2)
        b_s = c_s / (min(S.degrees) - 1)
        for word, value, parent in iter_words(S, P, B):
            hv = h(value)
            if not word.degree * (h_p - b_s) - slack <= hv <= word.degree * (h_p + b_s) + slack:
                out.append(f"telescoping bound fails for word {word.indices}")
            if parent is not None:
                g = S[word.indices[0]]
                c_bound = mp.log(multiplicative_height(g.constant)) + mp.log(2)
                if abs(hv - g.degree * h(parent)) > c_bound + slack:
                    out.append(f"single-step bound fails for word {word.indices}")
    return out


def strictly_increasing_paths(S: GeneratorSet, P, B: int) -> bool:
    """Every retained word raises the exact height over its parent point."""
    return all(
        parent is None or multiplicative_height(v) > multiplicative_height(parent)
        for _, v, parent in iter_words(S, P, B)
    )


# -- growth fitting ---------------------------------------------------------


@dataclass(frozen=True)
class GrowthFit:
    slope: float
    intercept: float
    log_log_bounds: tuple[float, ...]
    log_counts: tuple[float, ...]
    bracket: tuple[float, float] | None = None


def growth_fit(censuses: Iterable, bracket=None) -> GrowthFit:
    """Least-squares slope of ``log(point_count)`` against ``log(log B)``.

    Accepts :class:`Census` objects or ``(B, point_count)`` pairs.  The result
    is a report; no assertion is made about the slope.
    """
    pairs = [(c.bound, c.point_count) if isinstance(c, Census) else (int(c[0]), int(c[1]))
             for c in censuses]
    if len(pairs) < 4:
        raise DomainError("growth fit needs at least four census sizes")
    if any(n < 1 for _, n in pairs):
        raise DomainError("every census must contain at least one point")
    x = np.array([math.log(log_int(b)) for b, _ in pairs])
    y = np.array([math.log(n) for _, n in pairs])
    slope, intercept = np.polyfit(x, y, 1)
    br = None if bracket is None else (bracket.b_lower, bracket.b_upper)
    return GrowthFit(float(slope), float(intercept), tuple(x.tolist()), tuple(y.tolist()), br)
