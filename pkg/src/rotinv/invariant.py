"""
Assembly of the rotational invariants ``I_{j,k,l}(r1, r2, r3)``.

An invariant is stored as an exact polynomial in the scalar products

- ``ξa = ra·ra``,
- ``η1 = r2·r3``, ``η2 = r3·r1``, ``η3 = r1·r2``,

times a single-surd prefactor, with the pseudo-scalar ``ζ = (r1 × r2)·r3`` and a
factor ``i`` for odd ``j+k+l``. Canonical labels ``j <= k <= l`` come straight from
a coefficient table; any other order is the canonical invariant with relabelled
vectors and the phase ``(-1)^(j+k+l)`` per odd permutation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterator, Mapping, NamedTuple, Sequence

import numpy as np

from .angular import TriangleRuleError, require_triangle, wigner3j
from .coeffs import CoeffQuery, CoeffTable, coeff_table, monomial_exponents
from .exactnum import (
    ComplexSurd,
    RationalLike,
    SurdSum,
    factorial,
    format_ratio,
    format_single_surd,
)
from .solidharm import (
    ZERO_MONOMIAL,
    CartesianPoly,
    RationalTerms,
    dot_terms,
    multiply_terms,
    power_terms,
    triple_product_terms,
)

FORMATS = ("text", "latex", "json")


class NormalizationError(RuntimeError):
    """``P`` or ``Q`` vanished; the invariant would not be unique."""


@dataclass(frozen=True)
class InvariantSpec:
    j: int
    k: int
    l: int  # noqa: E741

    def __post_init__(self) -> None:
        require_triangle(self.j, self.k, self.l)

    @property
    def labels(self) -> tuple[int, int, int]:
        return self.j, self.k, self.l

    @property
    def parity(self) -> str:
        return "odd" if (self.j + self.k + self.l) % 2 else "even"

    @property
    def is_canonical(self) -> bool:
        return self.j <= self.k <= self.l

    @property
    def canonical_n(self) -> int:
        """``n`` of the canonical ordering (``(j+k-l)/2`` even, ``(j+k-l-1)/2`` odd)."""
        j, k, l = sorted(self.labels)  # noqa: E741
        if self.parity == "even":
            return (j + k - l) // 2
        return (j + k - l - 1) // 2

    def coeff_query(self) -> CoeffQuery:
        """Table query that assembles the canonical ordering of this spec."""
        j, k, _ = sorted(self.labels)
        if self.parity == "even":
            return CoeffQuery(j, k, self.canonical_n)
        return CoeffQuery(j - 1, k - 1, self.canonical_n)

    def __str__(self) -> str:
        return f"I_{self.j},{self.k},{self.l}"


class ScalarMonomial(NamedTuple):
    xi1: int
    xi2: int
    xi3: int
    eta1: int
    eta2: int
    eta3: int


_CONST = ScalarMonomial(0, 0, 0, 0, 0, 0)


class ScalarPoly:
    """Rational polynomial in ``(ξ1, ξ2, ξ3, η1, η2, η3)``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Sequence[int], RationalLike] | None = None) -> None:
        clean: dict[ScalarMonomial, Fraction] = {}
        for mono, coef in (terms or {}).items():
            c = Fraction(coef)
            if c:
                key = ScalarMonomial(*mono)
                clean[key] = clean.get(key, Fraction(0)) + c
        self._terms = {m: c for m, c in sorted(clean.items()) if c}

    @property
    def terms(self) -> dict[ScalarMonomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[ScalarMonomial, Fraction]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScalarPoly):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: ScalarPoly) -> ScalarPoly:
        merged = dict(self._terms)
        for m, c in other._terms.items():
            merged[m] = merged.get(m, Fraction(0)) + c
        return ScalarPoly(merged)

    def __neg__(self) -> ScalarPoly:
        return ScalarPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: ScalarPoly) -> ScalarPoly:
        return self + (-other)

    def __mul__(self, other: object) -> ScalarPoly:
        if isinstance(other, (int, Fraction)):
            return ScalarPoly({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, ScalarPoly):
            return NotImplemented
        out: dict[tuple[int, ...], Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                key = tuple(x + y for x, y in zip(m1, m2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return ScalarPoly(out)

    def evaluate(self, values: Sequence[RationalLike]) -> Fraction:
        total = Fraction(0)
        for mono, coef in self._terms.items():
            total += coef * math.prod(Fraction(v) ** e for v, e in zip(values, mono))
        return total

    def evaluate_float(self, values: Sequence[float]) -> float:
        vals = np.asarray(values, dtype=float)
        total = 0.0
        for mono, coef in self._terms.items():
            total += float(coef) * float(np.prod(np.power(vals, mono)))
        return total

    def to_cartesian_terms(self) -> RationalTerms:
        out: RationalTerms = {}
        for mono, coef in self._terms.items():
            for cart, c in _scalar_monomial_terms(mono).items():
                out[cart] = out.get(cart, Fraction(0)) + coef * c
        return {m: c for m, c in out.items() if c}


# η1 pairs r2·r3, η2 pairs r3·r1, η3 pairs r1·r2.
_SCALAR_PAIRS = ((1, 1), (2, 2), (3, 3), (2, 3), (3, 1), (1, 2))


@lru_cache(maxsize=256)
def _variable_power(var: int, e: int) -> RationalTerms:
    a, b = _SCALAR_PAIRS[var]
    return power_terms(dot_terms(a, b), e)


@lru_cache(maxsize=4096)
def _scalar_monomial_terms(mono: ScalarMonomial) -> RationalTerms:
    factors = [_variable_power(var, e) for var, e in enumerate(mono) if e]
    return reduce(multiply_terms, factors, {ZERO_MONOMIAL: Fraction(1)})


def zeta_squared_poly() -> ScalarPoly:
    """``ζ² = ξ1ξ2ξ3 − ξ1η1² − ξ2η2² − ξ3η3² + 2η1η2η3``."""
    return ScalarPoly(
        {
            (1, 1, 1, 0, 0, 0): 1,
            (1, 0, 0, 2, 0, 0): -1,
            (0, 1, 0, 0, 2, 0): -1,
            (0, 0, 1, 0, 0, 2): -1,
            (0, 0, 0, 1, 1, 1): 2,
        }
    )


@dataclass(frozen=True)
class InvariantPoly:
    spec: InvariantSpec
    prefactor: SurdSum
    imaginary: bool
    zeta_power: int
    poly: ScalarPoly

    def __post_init__(self) -> None:
        odd = self.spec.parity == "odd"
        if self.imaginary != odd or self.zeta_power != int(odd):
            raise ValueError(
                f"{self.spec}: imaginary/zeta flags {(self.imaginary, self.zeta_power)!r} "
                f"do not match parity {self.spec.parity!r}"
            )
        if not self.prefactor.is_single():
            raise ValueError(f"{self.spec}: prefactor must be a single surd, got {self.prefactor!r}")


# -- assembly ---------------------------------------------------------------------


def _normalized_poly(q: CoeffQuery, table: CoeffTable) -> ScalarPoly:
    total = table.normalizer
    if not total:
        raise NormalizationError(f"{table.kind} table {q!r} sums to zero")
    return ScalarPoly(
        {monomial_exponents(q, *idx): value / total for idx, value in table.entries.items()}
    )


def assemble_even(q: CoeffQuery, table: CoeffTable) -> InvariantPoly:
    if table.kind != "even" or table.query != q:
        raise ValueError(f"expected the even table of {q!r}, got {table.kind} {table.query!r}")
    j, k, l = q.label("even")  # noqa: E741
    return InvariantPoly(
        spec=InvariantSpec(j, k, l),
        prefactor=wigner3j(j, k, l, 0, 0, 0),
        imaginary=False,
        zeta_power=0,
        poly=_normalized_poly(q, table),
    )


def assemble_odd(q: CoeffQuery, table: CoeffTable) -> InvariantPoly:
    if table.kind != "odd" or table.query != q:
        raise ValueError(f"expected the odd table of {q!r}, got {table.kind} {table.query!r}")
    j, k, l = q.label("odd")  # noqa: E741
    ratio = Fraction(factorial(q.j + 2) * factorial(q.k + 2), factorial(q.j) * factorial(q.k))
    prefactor = SurdSum.sqrt_of(ratio) * Fraction(1, 2) * wigner3j(j, k, l, 1, -1, 0)
    return InvariantPoly(
        spec=InvariantSpec(j, k, l),
        prefactor=prefactor,
        imaginary=True,
        zeta_power=1,
        poly=_normalized_poly(q, table),
    )


def _permutation_parity(perm: Sequence[int]) -> int:
    inversions = sum(
        1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j]
    )
    return inversions % 2


def canonicalize(j: int, k: int, l: int) -> tuple[InvariantSpec, tuple[int, int, int], int]:  # noqa: E741
    """Sorted spec, the permutation and the phase linking it to ``I_{j,k,l}``.

    ``perm[i]`` is the original vector slot sitting at canonical position ``i+1``, and

        I_{j,k,l}(r1, r2, r3) = sign · I_canonical(r_perm[0], r_perm[1], r_perm[2]).
    """
    require_triangle(j, k, l)
    labels = (j, k, l)
    order = sorted(range(3), key=lambda i: labels[i])
    perm = tuple(i + 1 for i in order)
    spec = InvariantSpec(*(labels[i] for i in order))
    sign = -1 if (j + k + l) % 2 and _permutation_parity(perm) else 1
    return spec, perm, sign  # type: ignore[return-value]


def relabel(inv: InvariantPoly, spec: InvariantSpec, perm: Sequence[int], sign: int) -> InvariantPoly:
    """Express ``inv`` (canonical) as the invariant of ``spec`` under ``canonicalize``."""
    out: dict[tuple[int, ...], Fraction] = {}
    for mono, coef in inv.poly.items():
        xi = [0, 0, 0]
        eta = [0, 0, 0]
        for i, slot in enumerate(perm):
            xi[slot - 1] = mono[i]
            eta[slot - 1] = mono[3 + i]
        out[tuple(xi + eta)] = coef
    factor = sign
    if inv.zeta_power and _permutation_parity(perm):
        factor = -factor
    return InvariantPoly(
        spec=spec,
        prefactor=inv.prefactor * factor,
        imaginary=inv.imaginary,
        zeta_power=inv.zeta_power,
        poly=ScalarPoly(out),
    )


def build_invariant(j: int, k: int, l: int, *, method: str = "closed") -> InvariantPoly:  # noqa: E741
    """``I_{j,k,l}`` for any triangle-valid order of labels."""
    canon, perm, sign = canonicalize(j, k, l)
    q = canon.coeff_query()
    if canon.parity == "even":
        inv = assemble_even(q, coeff_table(q, "even", method))
    else:
        inv = assemble_odd(q, coeff_table(q, "odd", method))
    if perm == (1, 2, 3):
        return inv
    return relabel(inv, InvariantSpec(j, k, l), perm, sign)


def canonical_specs(max_l: int | None = None, max_sum: int | None = None) -> list[InvariantSpec]:
    """Canonical ``j <= k <= l`` specs bounded by the largest label and/or the label sum."""
    if max_l is None and max_sum is None:
        raise ValueError("canonical_specs needs max_l or max_sum")
    top = max_l if max_l is not None else max_sum
    assert top is not None
    out: list[InvariantSpec] = []
    for l in range(top + 1):  # noqa: E741
        for k in range(l + 1):
            for j in range(k + 1):
                if l > j + k:
                    continue
                if max_sum is not None and j + k + l > max_sum:
                    continue
                out.append(InvariantSpec(j, k, l))
    return sorted(out, key=lambda s: (s.j + s.k + s.l, s.labels))


# -- expansion and evaluation --------------------------------------------------


def _overall_factor(inv: InvariantPoly) -> ComplexSurd:
    if inv.imaginary:
        return ComplexSurd.imag(inv.prefactor)
    return ComplexSurd.real(inv.prefactor)


def to_cartesian(inv: InvariantPoly) -> CartesianPoly:
    """Exact expansion in the nine Cartesian components, ``i`` and prefactor folded in."""
    terms = inv.poly.to_cartesian_terms()
    if inv.zeta_power:
        terms = multiply_terms(terms, triple_product_terms())
    factor = _overall_factor(inv)
    return CartesianPoly({m: factor * c for m, c in terms.items()}, inv.spec.labels)


def scalar_products(
    r1: Sequence[RationalLike], r2: Sequence[RationalLike], r3: Sequence[RationalLike]
) -> tuple[list[Fraction], Fraction]:
    """``[ξ1, ξ2, ξ3, η1, η2, η3]`` and ``ζ`` for exact vectors."""
    vs = [[Fraction(x) for x in v] for v in (r1, r2, r3)]
    for v in vs:
        if len(v) != 3:
            raise ValueError(f"vectors must have three components, got {v!r}")

    def dot(a: int, b: int) -> Fraction:
        return sum((x * y for x, y in zip(vs[a - 1], vs[b - 1])), Fraction(0))

    values = [dot(a, b) for a, b in _SCALAR_PAIRS]
    u, v, w = vs
    zeta = (
        u[0] * (v[1] * w[2] - v[2] * w[1])
        - u[1] * (v[0] * w[2] - v[2] * w[0])
        + u[2] * (v[0] * w[1] - v[1] * w[0])
    )
    return values, zeta


def evaluate(
    inv: InvariantPoly,
    r1: Sequence[RationalLike],
    r2: Sequence[RationalLike],
    r3: Sequence[RationalLike],
) -> ComplexSurd:
    """Exact value by scalar-product substitution."""
    values, zeta = scalar_products(r1, r2, r3)
    value = inv.poly.evaluate(values)
    if inv.zeta_power:
        value *= zeta
    return _overall_factor(inv) * value


def evaluate_float(
    inv: InvariantPoly,
    r1: Sequence[float],
    r2: Sequence[float],
    r3: Sequence[float],
) -> complex:
    vs = [np.asarray(v, dtype=float) for v in (r1, r2, r3)]
    values = [float(np.dot(vs[a - 1], vs[b - 1])) for a, b in _SCALAR_PAIRS]
    value = inv.poly.evaluate_float(values)
    if inv.zeta_power:
        value *= float(np.dot(np.cross(vs[0], vs[1]), vs[2]))
    return complex(_overall_factor(inv)) * value


# -- rendering ---------------------------------------------------------------------

_TEXT_VARS = ("x1", "x2", "x3", "h1", "h2", "h3")
_LATEX_VARS = ("\\xi_{1}", "\\xi_{2}", "\\xi_{3}", "\\eta_{1}", "\\eta_{2}", "\\eta_{3}")


def _table_order(mono: ScalarMonomial) -> tuple[int, ...]:
    # (a, b, c) = (e_ξ1, e_η3, e_ξ2) orders terms as the coefficient tables do
    return (mono.xi1, mono.eta3, mono.xi2, *mono)


def integer_content(poly: ScalarPoly) -> tuple[Fraction, dict[ScalarMonomial, int]]:
    """Split ``poly`` into a positive leading rational and coprime integer coefficients."""
    coefs = [c for _, c in poly.items()]
    if not coefs:
        return Fraction(1), {}
    num = reduce(math.gcd, (abs(c.numerator) for c in coefs))
    den = reduce(math.lcm, (c.denominator for c in coefs))
    lead = Fraction(num, den)
    return lead, {m: int(c / lead) for m, c in poly.items()}


def _monomial_text(mono: ScalarMonomial, latex: bool) -> str:
    names = _LATEX_VARS if latex else _TEXT_VARS
    parts = []
    for name, e in zip(names, mono):
        if not e:
            continue
        if e == 1:
            parts.append(name)
        else:
            parts.append(f"{name}^{{{e}}}" if latex else f"{name}^{e}")
    return ("" if latex else " ").join(parts)


def _terms_text(ints: Mapping[ScalarMonomial, int], latex: bool) -> str:
    out = ""
    for i, mono in enumerate(sorted(ints, key=_table_order)):
        coef = ints[mono]
        body = _monomial_text(mono, latex)
        mag = abs(coef)
        if mag != 1 or not body:
            body = f"{mag}{body}" if latex else (f"{mag} {body}" if body else str(mag))
        if i == 0:
            out = f"-{body}" if coef < 0 else body
        elif latex:
            out += f"{'-' if coef < 0 else '+'}{body}"
        else:
            out += f" {'-' if coef < 0 else '+'} {body}"
    return out


def _head(inv: InvariantPoly, latex: bool) -> str:
    coef, radicand = inv.prefactor.single_term()
    mag = format_single_surd(abs(coef), radicand, latex=latex)
    sign = "-" if coef < 0 else ""
    if not inv.imaginary:
        return sign + mag
    unit = "\\mathrm{i}\\zeta" if latex else "i zeta"
    if mag == "1":
        return sign + unit
    if not latex and mag.startswith("1/"):
        return f"{sign}{unit}{mag[1:]}"
    return f"{sign}{unit}{mag}" if latex else f"{sign}{unit} {mag}"


def _render_math(inv: InvariantPoly, latex: bool) -> str:
    head = _head(inv, latex)
    if inv.poly == ScalarPoly({_CONST: 1}):
        return head
    lead, ints = integer_content(inv.poly)
    if lead == 1 and len(ints) == 1 and next(iter(ints.values())) == 1:
        body = _monomial_text(next(iter(ints)), latex)
        braces = False
    else:
        terms = _terms_text(ints, latex)
        if latex:
            lead_text = "" if lead == 1 else format_single_surd(lead, 1, latex=True)
            body = f"\\left\\{{{lead_text}\\left[{terms}\\right]\\right\\}}"
        else:
            lead_text = "" if lead == 1 else f"{lead.numerator}/{lead.denominator} "
            body = f"{{ {lead_text}[ {terms} ] }}"
        braces = True
    if head in ("1", "-1"):
        return ("-" if head == "-1" else "") + body
    if latex:
        return head + body
    return f"{head} * {body}" if braces else f"{head} {body}"


def to_document(inv: InvariantPoly) -> dict:
    coef, radicand = inv.prefactor.single_term()
    terms = [
        {"xi": list(mono[:3]), "eta": list(mono[3:]), "coef": format_ratio(c)}
        for mono, c in sorted(inv.poly.items())
    ]
    return {
        "j": inv.spec.j,
        "k": inv.spec.k,
        "l": inv.spec.l,
        "parity": inv.spec.parity,
        "prefactor": {"coef": format_ratio(coef), "radicand": radicand},
        "imaginary": inv.imaginary,
        "zeta": inv.zeta_power,
        "terms": terms,
    }


def render(inv: InvariantPoly, fmt: str = "text") -> str:
    """Deterministic ``text``, ``latex`` or ``json`` rendering."""
    if fmt == "text":
        return _render_math(inv, latex=False)
    if fmt == "latex":
        return _render_math(inv, latex=True)
    if fmt == "json":
        return json.dumps(to_document(inv), indent=2)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


__all__ = [
    "FORMATS",
    "InvariantPoly",
    "InvariantSpec",
    "NormalizationError",
    "ScalarMonomial",
    "ScalarPoly",
    "TriangleRuleError",
    "assemble_even",
    "assemble_odd",
    "build_invariant",
    "canonical_specs",
    "canonicalize",
    "evaluate",
    "evaluate_float",
    "relabel",
    "render",
    "scalar_products",
    "to_cartesian",
    "to_document",
    "zeta_squared_poly",
]
