"""
Racah-normalized solid harmonics ``C^l_m`` as exact Cartesian polynomials.

Polynomials live in the nine components ``(x1, y1, z1, x2, y2, z2, x3, y3, z3)``;
a monomial is a 9-tuple of exponents. ``C^l_m = sqrt(4π/(2l+1)) r^l Y_lm`` with the
Condon–Shortley phase, so the three-harmonic contraction never sees ``π``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

import numpy as np

from .exactnum import ComplexSurd, RationalLike, SurdSum, binomial, factorial

CartesianMonomial = tuple[int, ...]
Degrees = tuple[int, int, int]

_SLOTS = (1, 2, 3)
ZERO_MONOMIAL: CartesianMonomial = (0,) * 9


def _check_slot(slot: int) -> int:
    if slot not in _SLOTS:
        raise ValueError(f"vector slot must be 1, 2 or 3, got {slot!r}")
    return slot


def monomial_degrees(mono: CartesianMonomial) -> Degrees:
    return (
        mono[0] + mono[1] + mono[2],
        mono[3] + mono[4] + mono[5],
        mono[6] + mono[7] + mono[8],
    )


def place_in_slot(exps: Sequence[int], slot: int) -> CartesianMonomial:
    """Embed a 3-exponent ``(ex, ey, ez)`` into the 9-tuple of ``slot``."""
    base = 3 * (_check_slot(slot) - 1)
    out = [0] * 9
    out[base : base + 3] = exps
    return tuple(out)


def _mono_mul(a: CartesianMonomial, b: CartesianMonomial) -> CartesianMonomial:
    return tuple(x + y for x, y in zip(a, b))


def imag_power(e: int, value: SurdSum) -> ComplexSurd:
    """``i^e · value``."""
    r = e % 4
    if r == 0:
        return ComplexSurd(value, SurdSum())
    if r == 1:
        return ComplexSurd(SurdSum(), value)
    if r == 2:
        return ComplexSurd(-value, SurdSum())
    return ComplexSurd(SurdSum(), -value)


class CartesianPoly:
    """Sparse polynomial ``monomial -> ComplexSurd`` with declared per-vector degrees."""

    __slots__ = ("_terms", "degrees")

    def __init__(
        self,
        terms: Mapping[CartesianMonomial, ComplexSurd] | None = None,
        degrees: Degrees = (0, 0, 0),
    ) -> None:
        clean: dict[CartesianMonomial, ComplexSurd] = {}
        for mono, coef in (terms or {}).items():
            if coef.is_zero():
                continue
            if len(mono) != 9:
                raise ValueError(f"monomial must have 9 exponents, got {mono!r}")
            if monomial_degrees(mono) != tuple(degrees):
                raise ValueError(
                    f"monomial {mono!r} does not match declared degrees {degrees!r}"
                )
            clean[tuple(mono)] = coef
        self._terms = dict(sorted(clean.items()))
        self.degrees: Degrees = tuple(degrees)  # type: ignore[assignment]

    @classmethod
    def constant(cls, value: ComplexSurd | SurdSum | RationalLike = 1) -> CartesianPoly:
        if not isinstance(value, ComplexSurd):
            value = ComplexSurd.real(value)
        return cls({ZERO_MONOMIAL: value}, (0, 0, 0))

    @classmethod
    def from_rational(
        cls, terms: Mapping[CartesianMonomial, RationalLike], degrees: Degrees
    ) -> CartesianPoly:
        return cls(
            {m: ComplexSurd.real(SurdSum.rational(c)) for m, c in terms.items() if c},
            degrees,
        )

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[CartesianMonomial, ComplexSurd]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[CartesianMonomial, ComplexSurd]]:
        return iter(self._terms.items())

    def coefficient(self, mono: CartesianMonomial) -> ComplexSurd:
        return self._terms.get(tuple(mono), ComplexSurd.zero())

    def is_zero(self) -> bool:
        return not self._terms

    def is_real(self) -> bool:
        return all(c.im.is_zero() for c in self._terms.values())

    def is_imaginary(self) -> bool:
        return all(c.re.is_zero() for c in self._terms.values())

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CartesianPoly):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degrees == other.degrees and self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"CartesianPoly(degrees={self.degrees}, terms={len(self._terms)})"

    # -- arithmetic ---------------------------------------------------------

    def _combine(self, other: CartesianPoly, sign: int) -> CartesianPoly:
        if self.is_zero():
            return other if sign > 0 else -other
        if other.is_zero():
            return self
        if self.degrees != other.degrees:
            raise ValueError(
                f"cannot add polynomials of degrees {self.degrees!r} and {other.degrees!r}"
            )
        out = dict(self._terms)
        for mono, coef in other._terms.items():
            prev = out.get(mono)
            term = coef if sign > 0 else -coef
            out[mono] = term if prev is None else prev + term
        return CartesianPoly(out, self.degrees)

    def __add__(self, other: CartesianPoly) -> CartesianPoly:
        return self._combine(other, 1)

    def __sub__(self, other: CartesianPoly) -> CartesianPoly:
        return self._combine(other, -1)

    def __neg__(self) -> CartesianPoly:
        return CartesianPoly({m: -c for m, c in self._terms.items()}, self.degrees)

    def __mul__(self, other: object) -> CartesianPoly:
        if isinstance(other, (int, Fraction, SurdSum, ComplexSurd)):
            return self.scale(other)
        if not isinstance(other, CartesianPoly):
            return NotImplemented
        degrees = tuple(a + b for a, b in zip(self.degrees, other.degrees))
        out: dict[CartesianMonomial, ComplexSurd] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _mono_mul(m1, m2)
                prod = c1 * c2
                prev = out.get(mono)
                out[mono] = prod if prev is None else prev + prod
        return CartesianPoly(out, degrees)  # type: ignore[arg-type]

    def scale(self, factor: ComplexSurd | SurdSum | RationalLike) -> CartesianPoly:
        return CartesianPoly({m: c * factor for m, c in self._terms.items()}, self.degrees)

    def conjugate(self) -> CartesianPoly:
        return CartesianPoly({m: c.conjugate() for m, c in self._terms.items()}, self.degrees)

    def reflect(self) -> CartesianPoly:
        """Substitute ``r_a -> -r_a`` for all three vectors."""
        return CartesianPoly(
            {m: (-c if sum(m) % 2 else c) for m, c in self._terms.items()}, self.degrees
        )

    def relabel(self, slot_map: Mapping[int, int]) -> CartesianPoly:
        """Move the variables of vector ``s`` to vector ``slot_map[s]``."""
        targets = sorted(slot_map.values())
        if sorted(slot_map) != list(_SLOTS) or targets != list(_SLOTS):
            raise ValueError(f"slot map must permute (1, 2, 3), got {dict(slot_map)!r}")
        out: dict[CartesianMonomial, ComplexSurd] = {}
        for mono, coef in self._terms.items():
            new = [0] * 9
            for src, dst in slot_map.items():
                new[3 * (dst - 1) : 3 * dst] = mono[3 * (src - 1) : 3 * src]
            out[tuple(new)] = coef
        degrees = [0, 0, 0]
        for src, dst in slot_map.items():
            degrees[dst - 1] = self.degrees[src - 1]
        return CartesianPoly(out, tuple(degrees))  # type: ignore[arg-type]

    def evaluate(self, r1: Sequence[float], r2: Sequence[float], r3: Sequence[float]) -> complex:
        point = np.concatenate([np.asarray(v, dtype=float) for v in (r1, r2, r3)])
        total = 0j
        for mono, coef in self._terms.items():
            total += complex(coef) * float(np.prod(np.power(point, mono)))
        return total


def laplacian(p: CartesianPoly, vector_slot: int) -> CartesianPoly:
    """Exact ``∂²/∂x² + ∂²/∂y² + ∂²/∂z²`` in the variables of one vector."""
    base = 3 * (_check_slot(vector_slot) - 1)
    out: dict[CartesianMonomial, ComplexSurd] = {}
    for mono, coef in p.items():
        for axis in range(base, base + 3):
            e = mono[axis]
            if e < 2:
                continue
            lowered = list(mono)
            lowered[axis] = e - 2
            key = tuple(lowered)
            term = coef * (e * (e - 1))
            prev = out.get(key)
            out[key] = term if prev is None else prev + term
    degrees = list(p.degrees)
    degrees[vector_slot - 1] = max(degrees[vector_slot - 1] - 2, 0)
    return CartesianPoly(out, tuple(degrees))  # type: ignore[arg-type]


@lru_cache(maxsize=512)
def solid_harmonic_real_form(l: int, m: int) -> tuple[tuple[tuple[Degrees, Fraction], ...], int]:  # noqa: E741
    """Rational skeleton of ``C^l_m`` on ``(ex, ey, ez)`` exponents.

    The coefficient of ``x^ex y^ey z^ez`` is ``f · i^ey · sqrt(N)`` with
    ``N = (l+m)!(l-m)!``; returns ``(((exps, f), ...), N)``.
    """
    if l < 0 or abs(m) > l:
        raise ValueError(f"need 0 <= |m| <= l, got l={l!r}, m={m!r}")
    acc: dict[Degrees, Fraction] = {}
    for p in range(max(0, m), l + 1):
        q = p - m
        s = l - p - q
        if q < 0 or s < 0:
            continue
        base = Fraction(
            -1 if p % 2 else 1,
            2 ** (p + q) * factorial(p) * factorial(q) * factorial(s),
        )
        for a in range(p + 1):
            for b in range(q + 1):
                exps = (p + q - a - b, a + b, s)
                term = base * binomial(p, a) * binomial(q, b) * (-1 if b % 2 else 1)
                acc[exps] = acc.get(exps, Fraction(0)) + term
    skeleton = tuple(sorted((e, f) for e, f in acc.items() if f))
    return skeleton, factorial(l + m) * factorial(l - m)


def racah_solid_harmonic(l: int, m: int, vector_slot: int = 1) -> CartesianPoly:  # noqa: E741
    """``C^l_m`` in the components of ``vector_slot``; ``C^l_0`` has ``z^l`` coefficient 1."""
    _check_slot(vector_slot)
    skeleton, norm = solid_harmonic_real_form(l, m)
    root = SurdSum.sqrt_of(norm)
    terms = {
        place_in_slot(exps, vector_slot): imag_power(exps[1], root * f)
        for exps, f in skeleton
    }
    degrees = [0, 0, 0]
    degrees[vector_slot - 1] = l
    return CartesianPoly(terms, tuple(degrees))  # type: ignore[arg-type]


# -- scalar products as rational polynomials -----------------------------------

RationalTerms = dict[CartesianMonomial, Fraction]


def _slot_degrees(*slots: int) -> Degrees:
    d = [0, 0, 0]
    for s in slots:
        d[s - 1] += 1
    return tuple(d)  # type: ignore[return-value]


def dot_terms(a: int, b: int) -> RationalTerms:
    """``r_a · r_b`` as rational Cartesian terms."""
    out: RationalTerms = {}
    for axis in range(3):
        mono = [0] * 9
        mono[3 * (a - 1) + axis] += 1
        mono[3 * (b - 1) + axis] += 1
        out[tuple(mono)] = Fraction(1)
    return out


def triple_product_terms() -> RationalTerms:
    """``(r1 × r2) · r3`` as the six signed terms of the component determinant."""
    out: RationalTerms = {}
    for (i, j, k), sign in (
        ((0, 1, 2), 1),
        ((1, 2, 0), 1),
        ((2, 0, 1), 1),
        ((0, 2, 1), -1),
        ((2, 1, 0), -1),
        ((1, 0, 2), -1),
    ):
        mono = [0] * 9
        mono[i] += 1
        mono[3 + j] += 1
        mono[6 + k] += 1
        out[tuple(mono)] = Fraction(sign)
    return out


def multiply_terms(p: RationalTerms, q: RationalTerms) -> RationalTerms:
    out: RationalTerms = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            mono = _mono_mul(m1, m2)
            out[mono] = out.get(mono, Fraction(0)) + c1 * c2
    return {m: c for m, c in out.items() if c}


def power_terms(p: RationalTerms, e: int) -> RationalTerms:
    out: RationalTerms = {ZERO_MONOMIAL: Fraction(1)}
    for _ in range(e):
        out = multiply_terms(out, p)
    return out


def dot_poly(a: int, b: int) -> CartesianPoly:
    return CartesianPoly.from_rational(dot_terms(a, b), _slot_degrees(a, b))


def triple_product_poly() -> CartesianPoly:
    return CartesianPoly.from_rational(triple_product_terms(), (1, 1, 1))
