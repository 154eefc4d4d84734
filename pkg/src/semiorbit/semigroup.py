"""Unicritical generators ``z^d + c``, words in the free semigroup, and degree sets.

Words are stored outermost-first: ``Word((i1, ..., im))`` denotes
``g[i1] o ... o g[im]`` and is evaluated right to left.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import sympy
from mpmath import mp

from .errors import DomainError, PreconditionError, ResourceError
from .heights import as_point, format_point, log_int, multiplicative_height, parse_big_int

MERSENNE_PRIMES = (
    3,
    7,
    31,
    127,
    8191,
    131071,
    524287,
    2147483647,
    2305843009213693951,
)
# The tenth Mersenne prime has 27 digits.
MERSENNE_TAIL_BOUND = 10**26

DEFAULT_DEGREE_CAP = 10**4

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class Generator:
    """The polynomial ``leading * z^degree + constant``.

    ``leading`` other than 1 is only meaningful for diagnostic non-free sets.
    """

    degree: int
    constant: Fraction
    leading: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "constant", as_point(self.constant))
        object.__setattr__(self, "leading", as_point(self.leading))
        if self.degree < 2:
            raise DomainError(f"generator degree must be >= 2, got {self.degree}")
        if self.constant == 0:
            raise DomainError("generator constant must be nonzero")
        if self.leading == 0:
            raise DomainError("leading coefficient must be nonzero")

    def __call__(self, z: Fraction) -> Fraction:
        return self.leading * z**self.degree + self.constant

    def __str__(self):
        lead = "" if self.leading == 1 else ("-" if self.leading == -1 else f"{self.leading}*")
        return f"{lead}z^{self.degree}{'+' if self.constant > 0 else '-'}{format_point(abs(self.constant))}"


@dataclass(frozen=True)
class GeneratorSet:
    generators: tuple[Generator, ...]
    tail_bound: int | None = None
    diagnostic: bool = False

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise DomainError("generator set is empty")
        if not self.diagnostic and any(g.leading != 1 for g in gens):
            raise DomainError("non-monic generators are only allowed in diagnostic mode")

    @classmethod
    def unicritical(cls, degrees: Iterable[int], constant=1, tail_bound: int | None = None):
        return cls(tuple(Generator(int(d), as_point(constant)) for d in degrees), tail_bound)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(g.degree for g in self.generators)

    @property
    def shared_constant(self) -> Fraction | None:
        consts = {g.constant for g in self.generators}
        return consts.pop() if len(consts) == 1 else None

    @property
    def log_degree_set(self) -> list[float]:
        return [log_int(d) for d in self.degrees]

    def __len__(self):
        return len(self.generators)

    def __getitem__(self, i) -> Generator:
        return self.generators[i]

    def telescoping_constants(self) -> "TelescopingConstants":
        d_s = min(self.degrees)
        c_s = max(log_int(multiplicative_height(g.constant)) for g in self.generators) + LOG2
        return TelescopingConstants(d_S=float(d_s), C_S=c_s, b_S=c_s / (d_s - 1))

    def to_json(self) -> str:
        c = self.shared_constant
        if c is None or self.diagnostic:
            raise DomainError("only shared-constant monic sets serialize to a generator-set file")
        doc = {"constant": format_point(c), "degrees": list(self.degrees)}
        if self.tail_bound is not None:
            doc["tail_bound"] = str(self.tail_bound)
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "GeneratorSet":
        doc = json.loads(text)
        degrees = [parse_big_int(str(d)) for d in doc["degrees"]]
        tail = doc.get("tail_bound")
        return cls.unicritical(
            degrees, doc.get("constant", "1"), parse_big_int(str(tail)) if tail is not None else None
        )

    @classmethod
    def from_file(cls, path) -> "GeneratorSet":
        return cls.from_json(Path(path).read_text())


@dataclass(frozen=True)
class TelescopingConstants:
    d_S: float
    C_S: float
    b_S: float


@dataclass(frozen=True)
class Word:
    indices: tuple[int, ...] = ()
    degree: int = 1

    @classmethod
    def of(cls, indices: Sequence[int], S: GeneratorSet) -> "Word":
        indices = tuple(indices)
        return cls(indices, math.prod(S[i].degree for i in indices))

    @property
    def length(self) -> int:
        return len(self.indices)

    def then_apply(self, j: int, S: GeneratorSet) -> "Word":
        """The word ``g[j] o self``."""
        return Word((j,) + self.indices, self.degree * S[j].degree)


def evaluate(word: Word, S: GeneratorSet, P) -> Fraction:
    z = as_point(P)
    for i in reversed(word.indices):
        z = S[i](z)
    return z


def telescoping_interval(word: Word, S: GeneratorSet, P) -> tuple[float, float]:
    """Interval ``deg(f) * (h(P) -+ b_S)`` that must contain ``h(f(P))``."""
    h_p = log_int(multiplicative_height(as_point(P)))
    b_s = S.telescoping_constants().b_S
    if h_p <= b_s:
        raise PreconditionError(f"h(P) = {h_p:.6g} does not exceed b_S = {b_s:.6g}")
    return word.degree * (h_p - b_s), word.degree * (h_p + b_s)


# -- symbolic composition -------------------------------------------------


def _poly_mul(p: list, q: list) -> list:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    out[i + j] += a * b
    return out


def _poly_pow(p: list, n: int) -> list:
    result = [Fraction(1)]
    while n:
        if n & 1:
            result = _poly_mul(result, p)
        n >>= 1
        if n:
            p = _poly_mul(p, p)
    return result


def compose_symbolic(word: Word, S: GeneratorSet, degree_cap: int = DEFAULT_DEGREE_CAP) -> tuple:
    """Dense coefficients (low to high) of the composed polynomial."""
    degree = math.prod(S[i].degree for i in word.indices)
    if degree > degree_cap:
        raise ResourceError(f"composite degree {degree} exceeds cap {degree_cap}")
    poly = [Fraction(0), Fraction(1)]
    for i in reversed(word.indices):
        g = S[i]
        poly = [g.leading * a for a in _poly_pow(poly, g.degree)]
        poly[0] += g.constant
    return tuple(poly)


def find_relations(S: GeneratorSet, max_length: int, degree_cap: int = DEFAULT_DEGREE_CAP):
    """Group all words of length 1..max_length by composed polynomial.

    Returns a list of tuples of words that compose to the same polynomial;
    an empty list means no compositional relation was found.
    """
    seen: dict[tuple, list[Word]] = {}
    for length in range(1, max_length + 1):
        for idx in itertools.product(range(len(S)), repeat=length):
            w = Word.of(idx, S)
            seen.setdefault(compose_symbolic(w, S, degree_cap), []).append(w)
    return [tuple(ws) for ws in seen.values() if len(ws) > 1]


# -- degree sets ----------------------------------------------------------


def is_uniformly_log_discrete(degrees: Sequence[int], delta: float):
    """Check ``|log d - log d'| > delta`` for all distinct pairs.

    Returns ``(ok, witness)``; ``witness`` is a violating pair or ``None``.
    Only neighbours in sorted order need checking.
    """
    if delta <= 0:
        raise DomainError("delta must be positive")
    ds = sorted(int(d) for d in degrees)
    if len(set(ds)) != len(ds):
        raise DomainError("degrees must be distinct")
    with mp.workdps(50):
        ratio = mp.exp(mp.mpf(delta))
        for a, b in zip(ds, ds[1:]):
            if not mp.mpf(b) > ratio * a:
                return False, (a, b)
    return True, None


def min_log_gap(degrees: Sequence[int]) -> float:
    ds = sorted(int(d) for d in degrees)
    if len(ds) < 2:
        return math.inf
    with mp.workdps(50):
        return float(min(mp.log(mp.mpf(b) / a) for a, b in zip(ds, ds[1:])))


@dataclass(frozen=True)
class DegreeTable:
    degrees: tuple[int, ...]
    tail_bound: int | None = None


def mersenne_degrees(extra: Sequence[int] = (), tail_bound: int | None = None) -> DegreeTable:
    """The nine Mersenne primes used for the explicit exponents, plus tail bound.

    Extending the list requires supplying the matching tail bound.
    """
    if extra and tail_bound is None:
        raise DomainError("extending the Mersenne list requires a new tail bound")
    degrees = MERSENNE_PRIMES + tuple(int(q) for q in extra)
    return DegreeTable(degrees, MERSENNE_TAIL_BOUND if tail_bound is None else tail_bound)


def delta_spaced_primes(q0: int, delta: float, count: int) -> list[int]:
    """``q_{n+1}`` = least prime with ``log q > log q_n + delta``."""
    if not sympy.isprime(q0):
        raise DomainError(f"{q0} is not prime")
    if delta <= 0 or count < 1:
        raise DomainError("need delta > 0 and count >= 1")
    out = [int(q0)]
    with mp.workdps(60):
        ratio = mp.exp(mp.mpf(delta))
        while len(out) < count:
            q = int(sympy.nextprime(int(mp.floor(out[-1] * ratio))))
            while not mp.log(q) > mp.log(out[-1]) + delta:
                q = int(sympy.nextprime(q))
            out.append(q)
    return out


def power_plus_b_degrees(a: int, b: int, count: int) -> list[int]:
    """Degrees ``a^n + b`` for ``n = 1..count``."""
    if a < 2 or b < 0 or a + b < 2:
        raise DomainError("need a >= 2, b >= 0 and a + b >= 2")
    return [a**n + b for n in range(1, count + 1)]
