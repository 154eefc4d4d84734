"""Command-line front end.

Every report embeds the resolved configuration and the package version, and
is serialized with sorted keys so identical configs give identical bytes.
Failures print one JSON object to stderr and exit with a code that names the
failure class (see ``EXIT_CODES``).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__, _interval
from .approximation import approximate, verify_approximation
from .census import (
    collision_report,
    degree_sandwich,
    enumerate_orbit,
    growth_fit,
)
from .compositions import PartSet, count_asymptotic, count_table
from .errors import DomainError, PrecisionError, PreconditionError, ResourceError
from .exponents import direct_exponent_oracle, explicit_constants, exponent_bounds
from .heights import as_point, format_point, log_int, multiplicative_height, parse_big_int
from .semigroup import (
    MERSENNE_PRIMES,
    MERSENNE_TAIL_BOUND,
    Generator,
    GeneratorSet,
    find_relations,
)

COMMANDS = ("exponents", "census", "compositions", "approx", "freeness", "report")

EXIT_CODES = {
    "ok": 0,
    "internal": 1,
    "config": 2,
    "precision": 3,
    "resource": 4,
}


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


@dataclass
class RunConfig:
    command: str
    degrees: list[int] = field(default_factory=list)
    constant: str = "1"
    tail_bound: int | None = None
    delta: float = 1e-5
    denominator: int | None = None
    precision: int = _interval.DEFAULT_DPS
    tol: float = 1e-12
    point: str = "5"
    bounds: list[int] = field(default_factory=list)
    parts: list[int] = field(default_factory=list)
    max_n: int = 0
    max_length: int = 3
    diagnostic_pair: bool = False
    max_entries: int = 10**6
    eps_prime: float = 0.5
    cache: str | None = None
    output: str | None = None
    format: str = "json"

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.delta <= 0:
            raise ConfigError("--delta must be positive")
        if self.precision < 15:
            raise ConfigError("--precision must be at least 15 digits")
        if self.tol <= 0:
            raise ConfigError("--tol must be positive")
        if any(b < 1 for b in self.bounds):
            raise ConfigError("height bounds must be positive")
        if any(b2 <= b1 for b1, b2 in zip(self.bounds, self.bounds[1:])):
            raise ConfigError("--bound values must be strictly increasing")
        if self.format not in ("json", "csv"):
            raise ConfigError("--format must be json or csv")
        if self.command in ("exponents", "census", "approx", "report") and not self.degrees:
            raise ConfigError("--degrees is required")
        if self.command in ("census", "report") and not self.bounds:
            raise ConfigError("--bound is required")
        if self.command == "compositions" and (not self.parts or self.max_n < 0):
            raise ConfigError("--parts and a nonnegative --max-n are required")

    def resolved(self) -> dict:
        d = asdict(self)
        for k in ("degrees", "bounds"):
            d[k] = [str(x) for x in d[k]]
        if d["tail_bound"] is not None:
            d["tail_bound"] = str(d["tail_bound"])
        return d


def _int_list(text: str) -> list[int]:
    return [parse_big_int(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="semiorbit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--output", "-o", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--precision", type=int, default=None,
                        help=f"working decimal digits (env {_interval.DPS_ENV}; default 60)")

    def degree_opts(sp):
        sp.add_argument("--degrees", required=True,
                        help="comma-separated degrees, 'mersenne', or a generator-set JSON file")
        sp.add_argument("--constant", default=None, help="shared constant term (default 1)")
        sp.add_argument("--tail", default=None, help="tail bound for unknown further degrees")
        sp.add_argument("--no-tail", action="store_true", help="ignore any built-in tail bound")

    def exponent_opts(sp):
        sp.add_argument("--delta", default="1e-5")
        sp.add_argument("--denominator", default=None, help="override the common denominator u")
        sp.add_argument("--tol", default="1e-12", help="endpoint enclosure width")

    sp = sub.add_parser("exponents", help="two-sided growth exponent bracket")
    degree_opts(sp), exponent_opts(sp), common(sp)

    sp = sub.add_parser("census", help="exact orbit census up to height bounds")
    degree_opts(sp), common(sp)
    sp.add_argument("--point", default="5")
    sp.add_argument("--bound", action="append", required=True,
                    help="height bound (repeatable or comma-separated; 1e6 shorthand allowed)")
    sp.add_argument("--max-entries", type=int, default=10**6)
    sp.add_argument("--cache", default=None, help="write the largest census as JSON lines")

    sp = sub.add_parser("compositions", help="restricted composition counts")
    sp.add_argument("--parts", required=True)
    sp.add_argument("--max-n", type=int, required=True)
    common(sp)

    sp = sub.add_parser("approx", help="common-denominator log-degree sandwich")
    degree_opts(sp), exponent_opts(sp), common(sp)

    sp = sub.add_parser("freeness", help="search for compositional relations among short words")
    sp.add_argument("--degrees", default="2,3,5")
    sp.add_argument("--constant", default=None)
    sp.add_argument("--tail", default=None, help=argparse.SUPPRESS)
    sp.add_argument("--no-tail", action="store_true", help=argparse.SUPPRESS)
    sp.add_argument("--max-length", type=int, default=3)
    sp.add_argument("--diagnostic-pair", action="store_true",
                    help="use the non-free pair z^2+1, -z^2-1 instead")
    common(sp)

    sp = sub.add_parser("report", help="bracket, oracle, censuses and growth fit together")
    degree_opts(sp), exponent_opts(sp), common(sp)
    sp.add_argument("--point", default="5")
    sp.add_argument("--bound", action="append", required=True)
    sp.add_argument("--max-entries", type=int, default=10**6)
    sp.add_argument("--eps-prime", default="0.5")
    sp.add_argument("--cache", default=None)
    return p


def _resolve_degrees(args, cfg: RunConfig) -> None:
    text = args.degrees.strip()
    tail = None
    if text.lower() == "mersenne":
        cfg.degrees = list(MERSENNE_PRIMES)
        tail = MERSENNE_TAIL_BOUND
    elif text.endswith(".json") or Path(text).is_file():
        S = GeneratorSet.from_file(text)
        cfg.degrees = list(S.degrees)
        cfg.constant = format_point(S.shared_constant)
        tail = S.tail_bound
    else:
        cfg.degrees = _int_list(text)
    if getattr(args, "constant", None) is not None:
        cfg.constant = args.constant
    if getattr(args, "tail", None) is not None:
        tail = parse_big_int(args.tail)
    if getattr(args, "no_tail", False):
        tail = None
    cfg.tail_bound = tail


def config_from_args(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(command=args.command)
    if hasattr(args, "degrees"):
        _resolve_degrees(args, cfg)
    for name in ("delta", "tol", "eps_prime"):
        if getattr(args, name, None) is not None:
            setattr(cfg, name, float(getattr(args, name)))
    if getattr(args, "denominator", None) is not None:
        cfg.denominator = parse_big_int(args.denominator)
    cfg.precision = args.precision if args.precision is not None else _interval.default_dps()
    if getattr(args, "bound", None):
        cfg.bounds = [b for chunk in args.bound for b in _int_list(chunk)]
    for name in ("point", "max_entries", "max_length", "diagnostic_pair", "cache", "max_n"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if hasattr(args, "parts"):
        cfg.parts = _int_list(args.parts)
    cfg.output, cfg.format = args.output, args.format
    cfg.validate()
    return cfg


# -- command bodies ---------------------------------------------------------


def _generator_set(cfg: RunConfig) -> GeneratorSet:
    return GeneratorSet.unicritical(cfg.degrees, as_point(cfg.constant), cfg.tail_bound)


def _bracket(cfg: RunConfig):
    return exponent_bounds(cfg.degrees, cfg.tail_bound, cfg.delta, cfg.tol,
                           denominator=cfg.denominator, dps=cfg.precision)


def _oracle(cfg: RunConfig) -> dict:
    out = {"b": direct_exponent_oracle(cfg.degrees)}
    if cfg.tail_bound is not None:
        out["b_with_tail"] = direct_exponent_oracle(cfg.degrees, cfg.tail_bound)[1]
    return out


def _census_rows(cfg: RunConfig):
    S = _generator_set(cfg)
    big = enumerate_orbit(S, cfg.point, cfg.bounds[-1], cfg.max_entries)
    if cfg.cache:
        big.dump(cfg.cache)
    rows = []
    for B in cfg.bounds:
        c = big.restrict(B)
        rep = collision_report(c)
        rows.append({
            "bound": str(B),
            "point_count": c.point_count,
            "function_count": str(c.function_count),
            "max_multiplicity": rep.max_multiplicity,
        })
    return S, big, rows


def cmd_exponents(cfg: RunConfig):
    br = _bracket(cfg)
    body = {"bracket": br.to_dict(), "oracle": _oracle(cfg)}
    row = {
        "degrees": " ".join(map(str, cfg.degrees)),
        "tail_bound": "" if cfg.tail_bound is None else str(cfg.tail_bound),
        "delta": br.delta,
        "u": str(br.u),
        "N": str(br.N),
        "b_lower": repr(br.b_lower),
        "b_upper": repr(br.b_upper),
        "oracle": repr(body["oracle"]["b"]),
    }
    return body, [row]


def cmd_census(cfg: RunConfig):
    _, big, rows = _census_rows(cfg)
    body = {
        "base_point": format_point(big.base_point),
        "censuses": rows,
        "collision_histogram": {str(k): v for k, v in collision_report(big).histogram.items()},
    }
    return body, rows


def cmd_compositions(cfg: RunConfig):
    T = PartSet(cfg.parts)
    table = count_table(T, cfg.max_n)
    rows = []
    for n, exact in enumerate(table):
        asym = count_asymptotic(T, n) if T.gcd == 1 and len(T) >= 2 else None
        rows.append({
            "n": n,
            "exact": str(exact),
            "asymptotic": "" if asym is None else repr(asym),
            "ratio": "" if asym is None or exact == 0 else repr(asym / exact),
        })
    return {"parts": list(T.parts), "table": rows}, rows


def cmd_approx(cfg: RunConfig):
    E = approximate(cfg.degrees, cfg.delta, denominator=cfg.denominator, dps=cfg.precision)
    v = verify_approximation(cfg.degrees, cfg.delta, E, dps=cfg.precision)
    body = {"exponent_set": json.loads(E.to_json()), "verification": asdict(v),
            "deformed": E.deformed, "injective": E.injective}
    rows = [{"degree": str(d), "n": str(n), "m": str(m), "u": str(E.u)}
            for d, n, m in zip(E.keys, E.lower, E.upper)]
    return body, rows


def cmd_freeness(cfg: RunConfig):
    if cfg.diagnostic_pair:
        S = GeneratorSet((Generator(2, 1), Generator(2, -1, -1)), diagnostic=True)
    else:
        S = _generator_set(cfg)
    rel = find_relations(S, cfg.max_length)
    rows = [{"words": " = ".join(str(list(w.indices)) for w in group)} for group in rel]
    body = {"generators": [str(g) for g in S.generators], "max_length": cfg.max_length,
            "free_up_to_length": not rel, "relations": [r["words"] for r in rows]}
    return body, rows


def cmd_report(cfg: RunConfig):
    S, big, rows = _census_rows(cfg)
    br = _bracket(cfg)
    P = as_point(cfg.point)
    tc = S.telescoping_constants()
    h_p = log_int(multiplicative_height(P))
    body = {
        "bracket": br.to_dict(),
        "oracle": _oracle(cfg),
        "censuses": rows,
        "telescoping": asdict(tc),
    }
    if h_p > tc.b_S:
        lo, hi = explicit_constants(h_p, tc.b_S, br, cfg.eps_prime)
        body["explicit_constants"] = {"C_lower": lo, "C_upper": hi, "eps_prime": cfg.eps_prime}
        body["sandwich"] = [asdict(degree_sandwich(S, P, B)) | {"bound": str(B)} for B in cfg.bounds]
    if len(cfg.bounds) >= 4:
        fit = growth_fit([big.restrict(B) for B in cfg.bounds], br)
        body["growth_fit"] = asdict(fit)
    return body, rows


HANDLERS = {
    "exponents": cmd_exponents,
    "census": cmd_census,
    "compositions": cmd_compositions,
    "approx": cmd_approx,
    "freeness": cmd_freeness,
    "report": cmd_report,
}


def _to_csv(rows) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def run(cfg: RunConfig) -> str:
    """Execute a validated config and return the serialized report."""
    with _interval.working_precision(cfg.precision):
        body, rows = HANDLERS[cfg.command](cfg)
    if cfg.format == "csv":
        return _to_csv(rows)
    report = {"artifact": "semiorbit", "version": __version__, "config": cfg.resolved(),
              "result": body}
    return json.dumps(report, sort_keys=True, indent=2, default=_json_default) + "\n"


def _json_default(x):
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return str(x)


def _fail(kind: str, exc: Exception) -> int:
    code = EXIT_CODES[kind]
    err = {"error": type(exc).__name__, "kind": kind, "message": str(exc), "exit_code": code}
    print(json.dumps(err, sort_keys=True), file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
        text = run(cfg)
    except (ConfigError, DomainError, PreconditionError) as exc:
        return _fail("config", exc)
    except PrecisionError as exc:
        return _fail("precision", exc)
    except ResourceError as exc:
        return _fail("resource", exc)
    except ValueError as exc:
        return _fail("config", exc)
    except Exception as exc:  # noqa: BLE001
        return _fail("internal", exc)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
