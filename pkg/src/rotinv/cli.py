"""
``rotinv`` command line: emit invariants and coefficient tables, evaluate at vectors,
run the verification suites and manage the coefficient cache.

Exit codes: 0 ok, 1 verification failures, 2 usage/domain errors,
3 degenerate geometry, 4 cache corruption, 64 malformed flags.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .angular import TriangleRuleError
from .cache import CacheCorruptError, CoeffCache
from .coeffs import KINDS, METHODS, CoeffDomainError, CoeffQuery, coeff_table
from .exactnum import format_complex, format_ratio
from .invariant import FORMATS, build_invariant, evaluate, evaluate_float, render
from .logging_setup import install_logging
from .oracle import DegenerateGeometryError, appendix_eval, config_from_vectors
from .settings import LOG_LEVELS, Settings, load_settings, with_overrides
from .verify import SUITES, normalize_suites, run_verify

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_DOMAIN = 2
EXIT_DEGENERATE = 3
EXIT_CACHE_CORRUPT = 4
EXIT_BAD_FLAGS = 64


class UsageError(Exception):
    """Malformed command line (argparse usage error)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def parse_vector(text: str) -> tuple[Fraction, Fraction, Fraction]:
    """``"1,0,-1/2"`` (optionally in parentheses) as three exact components."""
    raw = text.strip().strip("()[]")
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 3:
        raise ValueError(f"vector {text!r} must have three comma-separated components")
    try:
        x, y, z = (Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"vector {text!r}: {exc}") from exc
    return x, y, z


def _format_float_complex(z: complex) -> str:
    return f"{z.real:.15g}{z.imag:+.15g}i"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="rotinv",
        description="Rotational invariants of three spherical harmonic polynomials.",
        epilog="Vectors are written x,y,z with exact components (1/2 or 0.5); wrap negatives in parentheses.",
    )
    parser.add_argument("--config", help="Config YAML (default: $ROTINV_CONFIG or data/config/rotinv.yaml)")
    parser.add_argument("--log-level", choices=LOG_LEVELS, type=str.upper, help="Log level (stderr)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("table", help="Render the invariant I_{j,k,l}")
    p.add_argument("j", type=int)
    p.add_argument("k", type=int)
    p.add_argument("l", type=int)
    p.add_argument("--format", choices=FORMATS, default="text")
    p.add_argument("--method", choices=METHODS, default="closed")

    p = sub.add_parser("coeffs", help="Coefficient table A_abc / B_abc for (j, k, n)")
    p.add_argument("j", type=int)
    p.add_argument("k", type=int)
    p.add_argument("n", type=int)
    p.add_argument("kind", nargs="?", choices=KINDS, default="even")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--method", choices=METHODS, default="closed")

    p = sub.add_parser("eval", help="Evaluate I_{j,k,l} at three vectors")
    p.add_argument("j", type=int)
    p.add_argument("k", type=int)
    p.add_argument("l", type=int)
    p.add_argument("r1")
    p.add_argument("r2")
    p.add_argument("r3")
    p.add_argument("--mode", choices=("exact", "float", "appendix"), default="exact")
    p.add_argument("--collinear-tol", type=float, help="Degeneracy threshold for appendix mode")

    p = sub.add_parser("verify", help="Run verification suites")
    p.add_argument("--max-l", type=int, help="Largest label checked (default from config)")
    p.add_argument(
        "--suite",
        action="append",
        help=f"all or one of {', '.join(SUITES)}; repeat or comma-separate",
    )
    p.add_argument("--workers", type=int)
    p.add_argument("--samples", type=int, help="Random configurations per spec (appendix)")
    p.add_argument("--rotations", type=int, help="Random rotations per spec (symmetry)")
    p.add_argument("--seed", type=int)
    p.add_argument("--appendix-rtol", type=float)
    p.add_argument("--rotation-rtol", type=float)

    p = sub.add_parser("cache", help="Build or inspect the coefficient cache")
    p.add_argument("action", choices=("build", "inspect"))
    p.add_argument("--path", help="Cache file (default: $ROTINV_CACHE_PATH or config cache_path)")
    p.add_argument("--max-l", type=int, default=6, help="Largest k stored by build (default 6)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


# -- commands ------------------------------------------------------------------------


def _seed_from_cache(settings: Settings) -> None:
    cache = CoeffCache(settings.cache_path)
    if cache.path.is_file():
        count = cache.seed_memo()
        _logger.debug("seeded %d tables from %s", count, cache.path)


def cmd_table(args: argparse.Namespace, settings: Settings) -> int:
    _seed_from_cache(settings)
    inv = build_invariant(args.j, args.k, args.l, method=args.method)
    print(render(inv, args.format))
    return EXIT_OK


def cmd_coeffs(args: argparse.Namespace, settings: Settings) -> int:
    q = CoeffQuery(args.j, args.k, args.n)
    _seed_from_cache(settings)
    table = coeff_table(q, args.kind, args.method)
    if args.format == "json":
        doc = {
            "kind": table.kind,
            "j": q.j,
            "k": q.k,
            "n": q.n,
            "lambda": table.lam,
            "normalizer": format_ratio(table.normalizer),
            "entries": [
                {"a": a, "b": b, "c": c, "value": format_ratio(v)}
                for (a, b, c), v in table.entries.items()
            ],
        }
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    name = "P" if table.kind == "even" else "Q"
    print(f"{table.kind} table j={q.j} k={q.k} n={q.n} lambda={table.lam} {name}={table.normalizer}")
    for (a, b, c), v in table.entries.items():
        print(f"({a},{b},{c}) {v}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace, settings: Settings) -> int:
    vectors = [parse_vector(v) for v in (args.r1, args.r2, args.r3)]
    _seed_from_cache(settings)
    inv = build_invariant(args.j, args.k, args.l)
    if args.mode == "exact":
        print(format_complex(evaluate(inv, *vectors)))
    elif args.mode == "float":
        floats = [[float(x) for x in v] for v in vectors]
        print(_format_float_complex(evaluate_float(inv, *floats)))
    else:
        tol = args.collinear_tol if args.collinear_tol is not None else settings.tolerances.collinear_tol
        floats = [[float(x) for x in v] for v in vectors]
        cfg = config_from_vectors(*floats, collinear_tol=tol)
        print(_format_float_complex(appendix_eval(inv.spec, cfg, collinear_tol=tol)))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    settings = with_overrides(
        settings,
        workers=args.workers,
        samples=args.samples,
        rotations=args.rotations,
        seed=args.seed,
        appendix_rtol=args.appendix_rtol,
        rotation_rtol=args.rotation_rtol,
    )
    max_l = settings.verify.max_l if args.max_l is None else args.max_l
    suites = normalize_suites(args.suite)
    report = run_verify(max_l, suites, options=settings.verify, tolerances=settings.tolerances)
    print(report.to_json())
    print(f"rotinv verify: {report.summary()}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_VERIFY_FAILED


def cmd_cache(args: argparse.Namespace, settings: Settings) -> int:
    path = Path(args.path).expanduser().resolve() if args.path else settings.cache_path
    cache = CoeffCache(path)
    if args.action == "build":
        manifest = cache.build(args.max_l)
    else:
        if not cache.path.exists():
            raise FileNotFoundError(f"no cache at {cache.path}")
        manifest = cache.inspect()
    if args.format == "json":
        print(json.dumps([{"key": m.key, "entries": m.entries, "sha256": m.sha256} for m in manifest], indent=2))
    else:
        print(f"{len(manifest)} tables")
        for m in manifest:
            print(f"{m.key} {m.entries} {m.sha256}")
    return EXIT_OK


COMMANDS = {
    "table": cmd_table,
    "coeffs": cmd_coeffs,
    "eval": cmd_eval,
    "verify": cmd_verify,
    "cache": cmd_cache,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_BAD_FLAGS
    try:
        settings = load_settings(args.config)
    except (OSError, ValueError) as exc:
        print(f"rotinv: config error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    install_logging(args.log_level or settings.log_level)
    try:
        return COMMANDS[args.command](args, settings)
    except DegenerateGeometryError as exc:
        print(f"rotinv: degenerate geometry: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except CacheCorruptError as exc:
        print(f"rotinv: {exc}", file=sys.stderr)
        return EXIT_CACHE_CORRUPT
    except (TriangleRuleError, CoeffDomainError, ValueError, FileNotFoundError) as exc:
        print(f"rotinv: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
