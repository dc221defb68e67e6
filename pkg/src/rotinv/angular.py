"""
Wigner 3-j symbols with exact surd values, plus triangle and selection predicates.

Values come from the Racah single-sum formula: the alternating sum is an exact
rational and the triangle/factorial radical is isolated, so every symbol is a
single-term :class:`~rotinv.exactnum.SurdSum` ``± q·√m``. Only integer angular
momenta are supported.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .exactnum import SurdSum, factorial


class TriangleRuleError(ValueError):
    """Raised when ``(j, k, l)`` violates ``|j-k| <= l <= j+k`` or is negative."""


def triangle_ok(j: int, k: int, l: int) -> bool:  # noqa: E741
    if j < 0 or k < 0 or l < 0:
        return False
    return abs(j - k) <= l <= j + k


def require_triangle(j: int, k: int, l: int) -> None:  # noqa: E741
    if not triangle_ok(j, k, l):
        raise TriangleRuleError(
            f"(j, k, l) = {(j, k, l)!r} violates the triangle rule |j-k| <= l <= j+k"
        )


def selection_ok(j: int, k: int, l: int, mu: int, nu: int, rho: int) -> bool:  # noqa: E741
    """True when the 3-j symbol can be nonzero."""
    if not triangle_ok(j, k, l):
        return False
    if mu + nu + rho != 0:
        return False
    return abs(mu) <= j and abs(nu) <= k and abs(rho) <= l


def wigner3j_permutation_phase(j: int, k: int, l: int) -> int:  # noqa: E741
    """``(-1)^(j+k+l)``: phase of an odd column permutation or of flipping all projections."""
    return -1 if (j + k + l) % 2 else 1


def wigner3j(j: int, k: int, l: int, mu: int, nu: int, rho: int) -> SurdSum:  # noqa: E741
    """Exact ``(j k l; mu nu rho)``; zero when the selection rules fail."""
    for name, v in (("j", j), ("k", k), ("l", l), ("mu", mu), ("nu", nu), ("rho", rho)):
        if not isinstance(v, int):
            raise TypeError(f"{name} must be an integer, got {v!r}")
    if not selection_ok(j, k, l, mu, nu, rho):
        return SurdSum()
    columns, phase = _canonical_columns(((j, mu), (k, nu), (l, rho)))
    (j1, m1), (j2, m2), (j3, m3) = columns
    coef, radicand = _wigner3j_cached(j1, j2, j3, m1, m2, m3)
    return SurdSum({radicand: phase * coef}) if coef else SurdSum()


def _canonical_columns(
    columns: tuple[tuple[int, int], ...],
) -> tuple[tuple[tuple[int, int], ...], int]:
    """Representative of the column-permutation / projection-flip orbit, with its phase."""
    odd = wigner3j_permutation_phase(*(c[0] for c in columns))
    best: tuple[tuple[tuple[int, int], ...], int] | None = None
    for flip in (False, True):
        cand = [(jj, -m if flip else m) for jj, m in columns]
        order = sorted(range(3), key=lambda i: cand[i], reverse=True)
        inversions = sum(1 for a in range(3) for b in range(a + 1, 3) if order[a] > order[b])
        phase = (odd if flip else 1) * (odd if inversions % 2 else 1)
        key = tuple(cand[i] for i in order)
        if best is None or key > best[0]:
            best = (key, phase)
    assert best is not None
    return best


def wigner3j_cache_info():
    return _wigner3j_cached.cache_info()


@lru_cache(maxsize=1 << 16)
def _wigner3j_cached(
    j1: int, j2: int, j3: int, m1: int, m2: int, m3: int
) -> tuple[Fraction, int]:
    triangle = Fraction(
        factorial(j1 + j2 - j3) * factorial(j1 - j2 + j3) * factorial(-j1 + j2 + j3),
        factorial(j1 + j2 + j3 + 1),
    )
    projections = (
        factorial(j1 + m1)
        * factorial(j1 - m1)
        * factorial(j2 + m2)
        * factorial(j2 - m2)
        * factorial(j3 + m3)
        * factorial(j3 - m3)
    )
    t_min = max(0, j2 - j3 - m1, j1 - j3 + m2)
    t_max = min(j1 + j2 - j3, j1 - m1, j2 + m2)
    total = Fraction(0)
    for t in range(t_min, t_max + 1):
        den = (
            factorial(t)
            * factorial(j3 - j2 + t + m1)
            * factorial(j3 - j1 + t - m2)
            * factorial(j1 + j2 - j3 - t)
            * factorial(j1 - t - m1)
            * factorial(j2 - t + m2)
        )
        total += Fraction(-1 if t % 2 else 1, den)
    if not total:
        return Fraction(0), 1
    phase = -1 if (j1 - j2 - m3) % 2 else 1
    root = SurdSum.sqrt_of(triangle * projections)
    c, m = root.single_term()
    return phase * total * c, m


def clebsch_gordan(j1: int, m1: int, j2: int, m2: int, j: int, m: int) -> SurdSum:
    """``<j1 m1 j2 m2 | j m>`` from the 3-j relation."""
    w = wigner3j(j1, j2, j, m1, m2, -m)
    if w.is_zero():
        return w
    phase = -1 if (j1 - j2 + m) % 2 else 1
    return w * SurdSum.sqrt_of(2 * j + 1) * phase
