"""
Exact number tower: rationals, quadratic-surd sums and complex surds.

- **Rational** is :class:`fractions.Fraction` (always reduced, positive denominator).
- **SurdSum** is a finite sum ``Σ c·√m`` keyed by squarefree radicand ``m ≥ 1``.
- **ComplexSurd** pairs two surd sums as real and imaginary parts.

All values are immutable. The only shared state is the ``lru_cache`` on
:func:`squarefree_split`, which is internally synchronized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Union

Rational = Fraction
RationalLike = Union[int, Fraction]


@lru_cache(maxsize=8192)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, m)`` with ``n = s²·m`` and ``m`` squarefree (trial division)."""
    if n < 1:
        raise ValueError(f"squarefree_split needs a positive integer, got {n!r}")
    s = 1
    m = 1
    rest = n
    p = 2
    while p * p <= rest:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        if e:
            s *= p ** (e // 2)
            if e % 2:
                m *= p
        p += 1 if p == 2 else 2
    if rest > 1:
        m *= rest
    return s, m


def double_factorial(n: int) -> int:
    """``n!!`` with ``(-1)!! = 0!! = 1``."""
    if n < -1:
        raise ValueError(f"double factorial undefined for {n!r}")
    out = 1
    for v in range(n, 0, -2):
        out *= v
    return out


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial undefined for {n!r}")
    return math.factorial(n)


def inv_factorial(n: int) -> Fraction:
    """``1/n!`` with the reciprocal of a negative factorial taken as 0."""
    if n < 0:
        return Fraction(0)
    return Fraction(1, math.factorial(n))


def binomial(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def parse_ratio(text: str) -> Fraction:
    """Parse an exact ``"numerator/denominator"`` (or plain integer) string."""
    raw = str(text).strip()
    num, sep, den = raw.partition("/")
    try:
        if not sep:
            return Fraction(int(num))
        return Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact ratio: {text!r}") from exc


def format_ratio(value: RationalLike) -> str:
    """Always ``"p/q"``, including integers (``"3/1"``)."""
    q = Fraction(value)
    return f"{q.numerator}/{q.denominator}"


def _is_square(n: int) -> tuple[bool, int]:
    r = math.isqrt(n)
    return r * r == n, r


class SurdSum:
    """Canonical finite sum ``Σ c·√m`` over squarefree radicands."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, RationalLike] | None = None) -> None:
        out: dict[int, Fraction] = {}
        for radicand, coef in (terms or {}).items():
            if radicand < 1:
                raise ValueError(f"radicand must be >= 1, got {radicand!r}")
            c = Fraction(coef)
            if not c:
                continue
            s, m = squarefree_split(radicand)
            out[m] = out.get(m, Fraction(0)) + c * s
        self._terms = {m: c for m, c in sorted(out.items()) if c}

    # -- constructors -------------------------------------------------------

    @classmethod
    def rational(cls, value: RationalLike) -> SurdSum:
        return cls({1: value})

    @classmethod
    def sqrt_of(cls, value: RationalLike, sign: int = 1) -> SurdSum:
        """``sign·√value`` for a non-negative rational; ``√(p/q)`` becomes ``√(pq)/q``."""
        q = Fraction(value)
        if q < 0:
            raise ValueError(f"square root of a negative rational: {q!r}")
        if not q or not sign:
            return cls()
        s, m = squarefree_split(q.numerator * q.denominator)
        return cls({m: Fraction(s * (1 if sign > 0 else -1), q.denominator)})

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[int, Fraction]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(m == 1 for m in self._terms)

    def is_single(self) -> bool:
        return len(self._terms) <= 1

    def single_term(self) -> tuple[Fraction, int]:
        """``(c, m)`` of a single-term surd (``(0, 1)`` for zero)."""
        if not self._terms:
            return Fraction(0), 1
        if len(self._terms) != 1:
            raise ValueError(f"surd has several terms: {self!r}")
        ((m, c),) = self._terms.items()
        return c, m

    def square_value(self) -> Fraction:
        """Square of a single-term surd, as a rational."""
        c, m = self.single_term()
        return c * c * m

    def sign(self) -> int:
        v = float(self)
        return (v > 0) - (v < 0)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: object) -> SurdSum:
        o = _as_surd(other)
        if o is None:
            return NotImplemented
        merged = dict(self._terms)
        for m, c in o._terms.items():
            merged[m] = merged.get(m, Fraction(0)) + c
        return SurdSum(merged)

    __radd__ = __add__

    def __neg__(self) -> SurdSum:
        return SurdSum({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: object) -> SurdSum:
        o = _as_surd(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> SurdSum:
        o = _as_surd(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> SurdSum:
        if isinstance(other, (int, Fraction)):
            return SurdSum({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, SurdSum):
            return NotImplemented
        return surd_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> SurdSum:
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("SurdSum division by zero")
            return SurdSum({m: c / other for m, c in self._terms.items()})
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        o = _as_surd(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __float__(self) -> float:
        return float(sum(float(c) * math.sqrt(m) for m, c in self._terms.items()))

    def __repr__(self) -> str:
        return f"SurdSum({format_surd(self)})"


def _as_surd(value: object) -> SurdSum | None:
    if isinstance(value, SurdSum):
        return value
    if isinstance(value, (int, Fraction)):
        return SurdSum.rational(value)
    return None


def surd_mul(a: SurdSum, b: SurdSum) -> SurdSum:
    """Exact product; ``√m1·√m2`` is re-split so every radicand stays squarefree."""
    out: dict[int, Fraction] = {}
    for m1, c1 in a._terms.items():
        for m2, c2 in b._terms.items():
            s, m = squarefree_split(m1 * m2)
            out[m] = out.get(m, Fraction(0)) + c1 * c2 * s
    return SurdSum(out)


@dataclass(frozen=True)
class ComplexSurd:
    """``re + i·im`` with surd-sum components."""

    re: SurdSum
    im: SurdSum

    @classmethod
    def zero(cls) -> ComplexSurd:
        return cls(SurdSum(), SurdSum())

    @classmethod
    def real(cls, value: SurdSum | RationalLike) -> ComplexSurd:
        v = _as_surd(value)
        assert v is not None
        return cls(v, SurdSum())

    @classmethod
    def imag(cls, value: SurdSum | RationalLike) -> ComplexSurd:
        v = _as_surd(value)
        assert v is not None
        return cls(SurdSum(), v)

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def conjugate(self) -> ComplexSurd:
        return ComplexSurd(self.re, -self.im)

    def __add__(self, other: ComplexSurd) -> ComplexSurd:
        return ComplexSurd(self.re + other.re, self.im + other.im)

    def __sub__(self, other: ComplexSurd) -> ComplexSurd:
        return ComplexSurd(self.re - other.re, self.im - other.im)

    def __neg__(self) -> ComplexSurd:
        return ComplexSurd(-self.re, -self.im)

    def __mul__(self, other: object) -> ComplexSurd:
        if isinstance(other, (int, Fraction, SurdSum)):
            return ComplexSurd(self.re * other, self.im * other)
        if not isinstance(other, ComplexSurd):
            return NotImplemented
        return ComplexSurd(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return not self.is_zero()


# -- rendering --------------------------------------------------------------


def _magnitude_parts(coef: Fraction, radicand: int) -> tuple[int, int]:
    """Reduced ``N/D`` with ``|c·√m|² = N/D``."""
    sq = coef * coef * radicand
    return sq.numerator, sq.denominator


def format_single_surd(coef: Fraction, radicand: int, *, latex: bool = False) -> str:
    """Render ``c·√m`` the way the invariant tables print prefactors.

    ``1/sqrt(5)``, ``sqrt(3/10)``, ``2/sqrt(105)``, ``sqrt(5)/3``; rationals as ``p/q``.
    """
    if not coef:
        return "0"
    sign = "-" if coef < 0 else ""
    if radicand == 1:
        c = abs(coef)
        if c.denominator == 1:
            return f"{sign}{c.numerator}"
        if latex:
            return f"{sign}\\frac{{{c.numerator}}}{{{c.denominator}}}"
        return f"{sign}{c.numerator}/{c.denominator}"
    num, den = _magnitude_parts(coef, radicand)
    num_sq, num_root = _is_square(num)
    den_sq, den_root = _is_square(den)
    if latex:
        if num_sq:
            body = f"\\frac{{{num_root}}}{{\\sqrt{{{den}}}}}"
        elif den == 1:
            body = f"\\sqrt{{{num}}}"
        elif den_sq:
            body = f"\\frac{{\\sqrt{{{num}}}}}{{{den_root}}}"
        else:
            body = f"\\sqrt{{\\frac{{{num}}}{{{den}}}}}"
    else:
        if num_sq:
            body = f"{num_root}/sqrt({den})"
        elif den == 1:
            body = f"sqrt({num})"
        elif den_sq:
            body = f"sqrt({num})/{den_root}"
        else:
            body = f"sqrt({num}/{den})"
    return sign + body


def format_surd(value: SurdSum, *, latex: bool = False) -> str:
    if value.is_zero():
        return "0"
    parts: list[str] = []
    for m, c in value.items():
        text = format_single_surd(c, m, latex=latex)
        if parts:
            parts.append(f"- {text[1:]}" if text.startswith("-") else f"+ {text}")
        else:
            parts.append(text)
    return " ".join(parts)


def _imaginary_text(value: SurdSum) -> str:
    if not value.is_single():
        return f"i*({format_surd(value)})"
    text = format_surd(value)
    sign = ""
    if text.startswith("-"):
        sign, text = "-", text[1:]
    if text == "1":
        return f"{sign}i"
    if text.startswith("1/"):
        return f"{sign}i{text[1:]}"
    return f"{sign}i*{text}"


def format_complex(value: ComplexSurd) -> str:
    """Exact text such as ``"1"``, ``"i/sqrt(6)"`` or ``"1/2 + i*sqrt(3)/2"``."""
    if value.im.is_zero():
        return format_surd(value.re)
    im_text = _imaginary_text(value.im)
    if value.re.is_zero():
        return im_text
    re_text = format_surd(value.re)
    if not value.re.is_single():
        re_text = f"({re_text})"
    if im_text.startswith("-"):
        return f"{re_text} - {im_text[1:]}"
    return f"{re_text} + {im_text}"
