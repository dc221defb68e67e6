"""
Published low-order invariant listings, loaded from ``data/golden_tables.yaml``
and compared monomial by monomial with the assembled invariants.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Optional

import yaml

from .angular import TriangleRuleError
from .exactnum import SurdSum, parse_ratio
from .invariant import InvariantPoly, InvariantSpec, ScalarMonomial, build_invariant

_logger = logging.getLogger(__name__)

_VARIABLES = ("x1", "x2", "x3", "h1", "h2", "h3")
_FACTOR_RE = re.compile(r"^(x1|x2|x3|h1|h2|h3)(?:\^(\d+))?$")
_KNOWN_KEYS = {"spec", "sign", "prefactor_square", "lead", "terms", "imaginary", "waiver"}


class GoldenDataError(ValueError):
    """The golden listing file is malformed."""


@dataclass(frozen=True)
class GoldenEntry:
    spec: InvariantSpec
    sign: int
    prefactor_square: Fraction
    imaginary: bool
    lead: Fraction
    terms: dict[ScalarMonomial, int]
    waiver: Optional[str] = None

    def coefficient(self, mono: ScalarMonomial) -> SurdSum:
        """Full listed coefficient ``sign · √square · lead · c`` of one monomial."""
        c = self.terms.get(mono, 0)
        return SurdSum.sqrt_of(self.prefactor_square, self.sign) * (self.lead * c)


@dataclass(frozen=True)
class GoldenResult:
    spec: InvariantSpec
    status: str  # pass | fail | waived
    detail: str


def parse_term(text: str) -> tuple[ScalarMonomial, int]:
    """``"-3 x2 h2^2"`` -> ``(ScalarMonomial(0, 1, 0, 0, 2, 0), -3)``."""
    tokens = str(text).split()
    if not tokens:
        raise GoldenDataError("empty term")
    try:
        coef = int(tokens[0])
    except ValueError as exc:
        raise GoldenDataError(f"term {text!r} must start with an integer coefficient") from exc
    exps = [0] * 6
    for tok in tokens[1:]:
        m = _FACTOR_RE.match(tok)
        if m is None:
            raise GoldenDataError(f"term {text!r}: unknown factor {tok!r}")
        exps[_VARIABLES.index(m.group(1))] += int(m.group(2) or 1)
    return ScalarMonomial(*exps), coef


def _parse_entry(raw: Any, parity: str) -> GoldenEntry:
    if not isinstance(raw, dict):
        raise GoldenDataError(f"{parity} entry must be a mapping, got {raw!r}")
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise GoldenDataError(f"{parity} entry {raw.get('spec')!r}: unknown keys {sorted(unknown)}")
    try:
        spec = InvariantSpec(*(int(x) for x in raw["spec"]))
        sign = int(raw["sign"])
        square = parse_ratio(raw["prefactor_square"])
        lead = parse_ratio(raw["lead"])
        raw_terms = list(raw["terms"])
    except KeyError as exc:
        raise GoldenDataError(f"{parity} entry {raw.get('spec')!r}: missing {exc}") from exc
    except (TypeError, ValueError, TriangleRuleError) as exc:
        raise GoldenDataError(f"{parity} entry {raw.get('spec')!r}: {exc}") from exc
    if spec.parity != parity:
        raise GoldenDataError(f"{spec} listed under {parity!r} but has {spec.parity} parity")
    if sign not in (1, -1):
        raise GoldenDataError(f"{spec}: sign must be 1 or -1, got {sign!r}")
    terms: dict[ScalarMonomial, int] = {}
    for item in raw_terms:
        mono, coef = parse_term(item)
        if mono in terms:
            raise GoldenDataError(f"{spec}: monomial {item!r} listed twice")
        terms[mono] = coef
    return GoldenEntry(
        spec=spec,
        sign=sign,
        prefactor_square=square,
        imaginary=bool(raw.get("imaginary", parity == "odd")),
        lead=lead,
        terms=terms,
        waiver=raw.get("waiver"),
    )


def parse_golden(doc: Any) -> list[GoldenEntry]:
    if not isinstance(doc, dict) or set(doc) - {"even", "odd"}:
        raise GoldenDataError("golden document must map 'even'/'odd' to entry lists")
    entries: list[GoldenEntry] = []
    seen: set[tuple[int, int, int]] = set()
    for parity in ("even", "odd"):
        for raw in doc.get(parity) or []:
            entry = _parse_entry(raw, parity)
            if entry.spec.labels in seen:
                raise GoldenDataError(f"{entry.spec} listed twice")
            seen.add(entry.spec.labels)
            entries.append(entry)
    return entries


def load_golden(path: Path | str | None = None) -> list[GoldenEntry]:
    """Entries from ``path``, or the listing shipped with the package."""
    if path is None:
        text = resources.files("rotinv").joinpath("data/golden_tables.yaml").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise GoldenDataError(f"golden tables are not valid YAML: {exc}") from exc
    return parse_golden(doc)


def _mismatches(entry: GoldenEntry, inv: InvariantPoly, sign: int = 1) -> list[str]:
    """Coefficient-level differences, with the listing scaled by ``sign``."""
    problems: list[str] = []
    built = dict(inv.poly.items())
    if set(built) != set(entry.terms):
        missing = sorted(set(entry.terms) - set(built))
        extra = sorted(set(built) - set(entry.terms))
        problems.append(f"monomial sets differ (missing {missing}, extra {extra})")
    for mono in sorted(set(built) & set(entry.terms)):
        ours = inv.prefactor * built[mono]
        if ours != entry.coefficient(mono) * sign:
            problems.append(f"coefficient of {tuple(mono)} differs")
    return problems


def compare(entry: GoldenEntry, inv: InvariantPoly | None = None) -> GoldenResult:
    """
    Exact comparison of one listing.

    A waiver only covers the imaginary flag and the overall sign; the prefactor
    magnitude and every polynomial coefficient must still match.
    """
    if inv is None:
        inv = build_invariant(*entry.spec.labels)
    flag_problem = (
        None
        if entry.imaginary == inv.imaginary
        else f"imaginary flag listed {entry.imaginary}, built {inv.imaginary}"
    )
    problems = _mismatches(entry, inv)
    if not problems and flag_problem is None:
        return GoldenResult(entry.spec, "pass", "matches listing")
    if entry.waiver:
        for sign in (1, -1):
            if _mismatches(entry, inv, sign):
                continue
            waived = [p for p in (flag_problem, "overall sign flipped" if sign < 0 else None) if p]
            detail = "; ".join(waived)
            _logger.info("%s: waived listing discrepancy (%s)", entry.spec, detail)
            return GoldenResult(entry.spec, "waived", f"{entry.waiver}: {detail}")
    detail = "; ".join(([flag_problem] if flag_problem else []) + problems)
    return GoldenResult(entry.spec, "fail", detail)


def compare_all(entries: Iterable[GoldenEntry] | None = None) -> list[GoldenResult]:
    return [compare(e) for e in (load_golden() if entries is None else entries)]


__all__ = [
    "GoldenDataError",
    "GoldenEntry",
    "GoldenResult",
    "compare",
    "compare_all",
    "load_golden",
    "parse_golden",
    "parse_term",
]
