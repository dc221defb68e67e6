"""
Exact coefficient tables ``A_abc`` (even invariants) and ``B_abc`` (odd invariants).

A table for ``(j, k, n)`` holds the coefficients of

    ξ1^a ξ2^c ξ3^(a+b+c-n) η1^(k-2c-b) η2^(j-2a-b) η3^b

over the index domain ``0 <= a <= j//2``, ``0 <= b <= j-2a``,
``max(0, n-a-b) <= c <= (k-b)//2``. Two independent builders exist:

- **closed**: the four region formulas driven by ``G_{a,b}`` (even) / ``F_{a,b}`` (odd);
- **recursive**: the seed ``A_00n`` plus the three Laplace relations, solved one
  unknown at a time in staged order.

Even and odd cases differ only in ``delta`` (1 or 3) in the leading terms, the
product factors and the double factorials, so one code path serves both.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Mapping

from .exactnum import double_factorial, factorial, inv_factorial

_logger = logging.getLogger(__name__)

Kind = Literal["even", "odd"]
Method = Literal["closed", "recursive"]
Index = tuple[int, int, int]

KINDS: tuple[str, ...] = ("even", "odd")
METHODS: tuple[str, ...] = ("closed", "recursive")


class CoeffDomainError(ValueError):
    """Query outside ``0 <= 2n <= j <= k``."""


class RecursionOrderError(RuntimeError):
    """A recursion step did not isolate exactly one solvable unknown."""


@dataclass(frozen=True, order=True)
class CoeffQuery:
    j: int
    k: int
    n: int

    def __post_init__(self) -> None:
        for name in ("j", "k", "n"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise CoeffDomainError(f"{name} must be an integer, got {v!r}")
        if not (0 <= 2 * self.n <= self.j <= self.k):
            raise CoeffDomainError(
                f"(j, k, n) = {(self.j, self.k, self.n)!r} violates 0 <= 2n <= j <= k"
            )

    @property
    def lam(self) -> int:
        return (self.j + self.k) // 2 - self.n

    def label(self, kind: str) -> tuple[int, int, int]:
        """Angular momenta ``(j, k, l)`` of the invariant this table assembles."""
        j, k, n = self.j, self.k, self.n
        if kind == "even":
            return j, k, j + k - 2 * n
        return j + 1, k + 1, j + k - 2 * n + 1


def _check_kind(kind: str) -> int:
    if kind == "even":
        return 1
    if kind == "odd":
        return 3
    raise ValueError(f"unknown table kind {kind!r}; expected one of {KINDS}")


def in_domain(q: CoeffQuery, a: int, b: int, c: int) -> bool:
    if a < 0 or b < 0 or c < 0:
        return False
    if 2 * a > q.j or b > q.j - 2 * a:
        return False
    return max(0, q.n - a - b) <= c and 2 * c <= q.k - b


def index_domain(q: CoeffQuery) -> list[Index]:
    """All ``(a, b, c)`` in lexicographic order."""
    out: list[Index] = []
    for a in range(q.j // 2 + 1):
        for b in range(q.j - 2 * a + 1):
            for c in range(max(0, q.n - a - b), (q.k - b) // 2 + 1):
                out.append((a, b, c))
    return out


def monomial_exponents(q: CoeffQuery, a: int, b: int, c: int) -> tuple[int, ...]:
    """``(e_ξ1, e_ξ2, e_ξ3, e_η1, e_η2, e_η3)`` of the monomial carried by ``(a, b, c)``."""
    return (a, c, a + b + c - q.n, q.k - 2 * c - b, q.j - 2 * a - b, b)


@dataclass(frozen=True)
class CoeffTable:
    query: CoeffQuery
    kind: str
    entries: Mapping[Index, Fraction] = field(default_factory=dict)
    lam: int = 0

    def get(self, a: int, b: int, c: int) -> Fraction:
        """Entry lookup; indices outside the domain read as 0."""
        return self.entries.get((a, b, c), Fraction(0))

    @property
    def normalizer(self) -> Fraction:
        """``P = Σ A_abc`` (even) or ``Q = Σ B_abc`` (odd)."""
        return sum(self.entries.values(), Fraction(0))

    def non_integral(self) -> list[Index]:
        return [idx for idx, v in self.entries.items() if v.denominator != 1]


# -- building blocks -----------------------------------------------------------


def _product(q: CoeffQuery, delta: int, start: int) -> int:
    """``∏_{m=start}^{λ} 2m(2j+2k-4n-2m+delta)``; empty product is 1."""
    out = 1
    for m in range(max(start, 1), q.lam + 1):
        out *= 2 * m * (2 * q.j + 2 * q.k - 4 * q.n - 2 * m + delta)
    return out


def _gf(q: CoeffQuery, a: int, b: int, delta: int) -> Fraction:
    j, k, n = q.j, q.k, q.n
    if a < 0 or b < 0 or a + b > n:
        return Fraction(0)
    o = delta - 2  # -1 for G, +1 for F
    total = Fraction(0)
    for r in range(max(0, 2 * a + b - n), a + 1):
        sign = -1 if (a + b + r) % 2 else 1
        head = Fraction(sign * factorial(n), 2 ** (a - r)) * inv_factorial(r)
        head *= inv_factorial(a - r) * inv_factorial(b)
        mid = factorial(j - 2 * a - b + r) * factorial(k - 2 * n + 2 * a + b)
        mid_den = inv_factorial(n - 2 * a - b + r) * inv_factorial(j - n)
        mid_den *= inv_factorial(k - 2 * n + 2 * a + b - r)
        dfs = Fraction(
            double_factorial(2 * j - 2 * a + o)
            * double_factorial(2 * k - 2 * n + 4 * a + 2 * b - 2 * r + o),
            double_factorial(2 * j - 2 * n + o) * double_factorial(2 * k - 2 * n + o),
        )
        total += head * mid * mid_den * dfs
    return total


def g_function(q: CoeffQuery, a: int, b: int) -> Fraction:
    """``G_{a,b}``; zero when ``a < 0``, ``b < 0`` or ``a + b > n``."""
    return _gf(q, a, b, 1)


def f_function(q: CoeffQuery, a: int, b: int) -> Fraction:
    """``F_{a,b}``, the odd-case analogue of :func:`g_function`."""
    return _gf(q, a, b, 3)


def _seed(q: CoeffQuery, delta: int) -> Fraction:
    o = delta - 2
    head = Fraction(
        factorial(q.k - q.n) * double_factorial(2 * q.j + o),
        factorial(q.k - 2 * q.n) * double_factorial(2 * q.j - 2 * q.n + o),
    )
    return head * _product(q, delta, 1)


def seed_even(q: CoeffQuery) -> Fraction:
    """``A_00n``."""
    return _seed(q, 1)


def seed_odd(q: CoeffQuery) -> Fraction:
    """``B_00n``."""
    return _seed(q, 3)


# -- closed forms ----------------------------------------------------------------


def _region_i(q: CoeffQuery, delta: int, a: int, b: int) -> Fraction:
    j, k, n = q.j, q.k, q.n
    value = _gf(q, a, b, delta) * factorial(j - n) * factorial(k - n)
    value *= inv_factorial(j - 2 * a - b) * inv_factorial(k - 2 * n + 2 * a + b)
    return value * _product(q, delta, 1)


def _region_ii(
    q: CoeffQuery, delta: int, a: int, b: int, c: int, wide: bool = False
) -> Fraction:
    """Entry ``(a, b, n-a-b+c)`` for ``a + b <= n``."""
    j, k, n = q.j, q.k, q.n
    outer = Fraction(factorial(j - n) * factorial(k - n) * factorial(c))
    outer *= inv_factorial(j - 2 * a - b) * inv_factorial(k - 2 * n + 2 * a + b - 2 * c)
    total = Fraction(0)
    for s in range(b + 1):
        r_lo = s if wide else max(s, c - a)
        for r in range(r_lo, c + 1):
            g = _gf(q, a - c + r, b - s, delta)
            if not g:
                continue
            total += g * 2**s * inv_factorial(c - r) * inv_factorial(r - s) * inv_factorial(s)
    sign = -1 if c % 2 else 1
    return sign * total * outer * _product(q, delta, c + 1)


def _region_iii(
    q: CoeffQuery, delta: int, a: int, b: int, c: int, wide: bool = False
) -> Fraction:
    """Entry ``(a, n-a+b, c)`` for ``a <= n``."""
    j, k, n = q.j, q.k, q.n
    outer = Fraction(factorial(j - n) * factorial(k - n) * factorial(b + c))
    outer *= inv_factorial(j - n - a - b) * inv_factorial(k - n + a - b - 2 * c)
    if wide:
        s_range = range(0, b + c + 1)
    else:
        s_range = range(max(0, b - a), min(b + c, n - a + b) + 1)
    total = Fraction(0)
    for s in s_range:
        if wide:
            r_range = range(s, s + c + 1)
        else:
            r_range = range(max(s, b + c - a), min(s + c, b + c) + 1)
        for r in r_range:
            g = _gf(q, a - b - c + r, n - a + b - s, delta)
            if not g:
                continue
            total += g * 2**s * inv_factorial(r - s) * inv_factorial(s) * inv_factorial(b + c - r)
    sign = -1 if (b + c) % 2 else 1
    return sign * total * outer * _product(q, delta, b + c + 1)


def _region_iv(
    q: CoeffQuery, delta: int, a: int, b: int, c: int, wide: bool = False
) -> Fraction:
    """Entry ``(n+a, b, c)``."""
    j, k, n = q.j, q.k, q.n
    outer = Fraction(factorial(j - n) * factorial(k - n) * factorial(a + b + c))
    outer *= inv_factorial(j - 2 * n - 2 * a - b) * inv_factorial(k - 2 * c - b)
    total = Fraction(0)
    for s in range(0 if wide else max(0, b - n), b + 1):
        for r in range(s if wide else max(s, b + c - n), s + c + 1):
            g = _gf(q, n - b - c + r, b - s, delta)
            if not g:
                continue
            total += (
                g * 2**s * inv_factorial(r - s) * inv_factorial(s) * inv_factorial(a + b + c - r)
            )
    sign = -1 if (a + b + c) % 2 else 1
    return sign * total * outer * _product(q, delta, a + b + c + 1)


def region_of(q: CoeffQuery, a: int, b: int, c: int) -> str:
    """Closed-form region that owns ``(a, b, c)``: ``I``, ``II``, ``III`` or ``IV``."""
    if not in_domain(q, a, b, c):
        raise CoeffDomainError(f"index {(a, b, c)!r} outside the domain of {q!r}")
    n = q.n
    if a > n:
        return "IV"
    if a + b > n:
        return "III"
    return "I" if c == n - a - b else "II"


def _closed_entry(q: CoeffQuery, delta: int, idx: Index, wide: bool) -> Fraction:
    a, b, c = idx
    n = q.n
    region = region_of(q, a, b, c)
    if region == "I":
        return _region_i(q, delta, a, b)
    if region == "II":
        return _region_ii(q, delta, a, b, c - (n - a - b), wide)
    if region == "III":
        return _region_iii(q, delta, a, b - (n - a), c, wide)
    return _region_iv(q, delta, a - n, b, c, wide)


def _table_closed(q: CoeffQuery, kind: str, wide: bool = False) -> CoeffTable:
    delta = _check_kind(kind)
    entries = {idx: _closed_entry(q, delta, idx, wide) for idx in index_domain(q)}
    return CoeffTable(q, kind, entries, q.lam)


def table_even_closed(q: CoeffQuery) -> CoeffTable:
    return _table_closed(q, "even")


def table_odd_closed(q: CoeffQuery) -> CoeffTable:
    return _table_closed(q, "odd")


def table_closed_wide(q: CoeffQuery, kind: str) -> CoeffTable:
    """Closed forms summed without the tightened bounds; vanishing terms must stay zero."""
    return _table_closed(q, kind, wide=True)


def region_boundary_checks(q: CoeffQuery, kind: str) -> list[tuple[str, Index, Fraction, Fraction]]:
    """Indices reachable from two region parameterizations where the values differ."""
    delta = _check_kind(kind)
    n = q.n
    mismatches: list[tuple[str, Index, Fraction, Fraction]] = []

    def check(tag: str, idx: Index, left: Fraction, right: Fraction) -> None:
        if left != right:
            mismatches.append((tag, idx, left, right))

    for a in range(n + 1):
        for b in range(n - a + 1):
            idx = (a, b, n - a - b)
            if in_domain(q, *idx):
                check("I/II", idx, _region_i(q, delta, a, b), _region_ii(q, delta, a, b, 0))
        b = n - a
        for c in range(0, (q.k + b) // 2 + a - n + 1):
            idx = (a, n - a, c)
            if in_domain(q, *idx):
                check(
                    "II/III",
                    idx,
                    _region_ii(q, delta, a, b, c),
                    _region_iii(q, delta, a, 0, c),
                )
    if 2 * n <= q.j:
        for b in range(q.j - 2 * n + 1):
            for c in range((q.k - b) // 2 + 1):
                idx = (n, b, c)
                if in_domain(q, *idx):
                    check(
                        "III/IV",
                        idx,
                        _region_iii(q, delta, n, b, c),
                        _region_iv(q, delta, 0, b, c),
                    )
    return mismatches


# -- recursion -----------------------------------------------------------------

_RELATIONS = ("eq1", "eq2", "eq3")


def relation_terms(
    q: CoeffQuery, kind: str, relation: str, a: int, b: int, c: int
) -> list[tuple[Index, int]]:
    """The four ``(index, coefficient)`` terms of a Laplace relation instance."""
    delta = _check_kind(kind)
    j, k, n = q.j, q.k, q.n
    if relation == "eq1":
        f = j - 2 * a - b
        return [
            ((a, b, c), 2 * a * (2 * j - 2 * a + delta)),
            ((a - 1, b, c), (f + 2) * (f + 1)),
            ((a - 1, b + 2, c - 1), (b + 2) * (b + 1)),
            ((a - 1, b + 1, c), 2 * (b + 1) * (f + 1)),
        ]
    if relation == "eq2":
        e = k - 2 * c - b
        return [
            ((a, b, c), 2 * c * (2 * k - 2 * c + delta)),
            ((a, b, c - 1), (e + 2) * (e + 1)),
            ((a - 1, b + 2, c - 1), (b + 2) * (b + 1)),
            ((a, b + 1, c - 1), 2 * (b + 1) * (e + 1)),
        ]
    if relation == "eq3":
        e = k - 2 * c - b
        f = j - 2 * a - b
        return [
            ((a, b, c), 2 * (a + b + c - n) * (2 * k + 2 * j - 2 * a - 2 * b - 2 * c - 2 * n + delta)),
            ((a, b, c - 1), (e + 2) * (e + 1)),
            ((a - 1, b, c), (f + 2) * (f + 1)),
            ((a, b - 1, c), 2 * (e + 1) * (f + 1)),
        ]
    raise ValueError(f"unknown relation {relation!r}; expected one of {_RELATIONS}")


def _relation_offsets(relation: str) -> list[Index]:
    q0 = CoeffQuery(0, 0, 0)
    return [t for t, _ in relation_terms(q0, "even", relation, 0, 0, 0)]


def laplace_residuals(table: CoeffTable) -> list[tuple[str, Index, Fraction]]:
    """Nonzero residuals of the three relations over every instance touching the table."""
    q = table.query
    bad: list[tuple[str, Index, Fraction]] = []
    for relation in _RELATIONS:
        instances: set[Index] = set()
        offsets = _relation_offsets(relation)
        for a, b, c in table.entries:
            for oa, ob, oc in offsets:
                instances.add((a - oa, b - ob, c - oc))
        for inst in sorted(instances):
            residual = sum(
                (coef * table.get(*idx) for idx, coef in relation_terms(q, table.kind, relation, *inst)),
                Fraction(0),
            )
            if residual:
                bad.append((relation, inst, residual))
    return bad


class _RecursionSolver:
    def __init__(self, q: CoeffQuery, kind: str) -> None:
        self.q = q
        self.kind = kind
        self.known: dict[Index, Fraction] = {}

    def lookup(self, idx: Index) -> Fraction:
        if not in_domain(self.q, *idx):
            return Fraction(0)
        try:
            return self.known[idx]
        except KeyError:
            raise RecursionOrderError(
                f"{self.kind} table {self.q!r}: coefficient {idx!r} needed before it is known"
            ) from None

    def solve(self, relation: str, instance: Index, target: Index) -> None:
        terms = relation_terms(self.q, self.kind, relation, *instance)
        lead = sum(coef for idx, coef in terms if idx == target)
        if lead == 0:
            raise RecursionOrderError(
                f"{self.kind} table {self.q!r}: {relation} at {instance!r} has zero "
                f"coefficient for unknown {target!r}"
            )
        rest = sum(
            (coef * self.lookup(idx) for idx, coef in terms if idx != target), Fraction(0)
        )
        self.known[target] = -rest / lead

    def run(self) -> dict[Index, Fraction]:
        q, n = self.q, self.q.n
        self.known[(0, 0, n)] = _seed(q, _check_kind(self.kind))
        # stage 1: the d = 0 layer (a + b + c = n)
        for b in range(1, n + 1):
            self.solve("eq2", (0, b - 1, n - b + 1), (0, b, n - b))
        for a in range(1, n + 1):
            for b in range(n - a + 1):
                self.solve("eq1", (a, b, n - a - b), (a, b, n - a - b))
        # stages 2-4: every remaining entry from eq3, layer by layer in d
        stages: dict[str, list[Index]] = {"II": [], "III": [], "IV": []}
        for idx in index_domain(q):
            region = region_of(q, *idx)
            if region != "I":
                stages[region].append(idx)
        for region in ("II", "III", "IV"):
            ordered = sorted(stages[region], key=lambda t: (t[0] + t[1] + t[2] - n, t))
            for idx in ordered:
                self.solve("eq3", idx, idx)
            _logger.debug("%s %s stage %s solved %d entries", self.kind, q, region, len(ordered))
        missing = [idx for idx in index_domain(q) if idx not in self.known]
        if missing:
            raise RecursionOrderError(f"{self.kind} table {q!r}: unsolved entries {missing!r}")
        return {idx: self.known[idx] for idx in index_domain(q)}


def _table_recursive(q: CoeffQuery, kind: str) -> CoeffTable:
    _check_kind(kind)
    return CoeffTable(q, kind, _RecursionSolver(q, kind).run(), q.lam)


def table_even_recursive(q: CoeffQuery) -> CoeffTable:
    return _table_recursive(q, "even")


def table_odd_recursive(q: CoeffQuery) -> CoeffTable:
    return _table_recursive(q, "odd")


# -- memoized access -------------------------------------------------------------

_memo: dict[tuple[str, str, CoeffQuery], CoeffTable] = {}
_memo_lock = threading.Lock()
_fill_locks: dict[tuple[str, str, CoeffQuery], threading.Lock] = {}


def coeff_table(q: CoeffQuery, kind: str = "even", method: str = "closed") -> CoeffTable:
    """Memoized table; concurrent requests for one key build it once."""
    _check_kind(kind)
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    key = (kind, method, q)
    with _memo_lock:
        hit = _memo.get(key)
        if hit is not None:
            return hit
        fill_lock = _fill_locks.setdefault(key, threading.Lock())
    with fill_lock:
        with _memo_lock:
            hit = _memo.get(key)
        if hit is not None:
            return hit
        builder = _table_closed if method == "closed" else _table_recursive
        table = builder(q, kind)
        with _memo_lock:
            _memo[key] = table
    _logger.debug("built %s %s table for %s (%d entries)", method, kind, q, len(table.entries))
    return table


def seed_table(tables: Iterable[CoeffTable], method: str = "closed") -> None:
    """Preload memo entries, e.g. from the on-disk cache."""
    with _memo_lock:
        for t in tables:
            _memo[(t.kind, method, t.query)] = t


def clear_memo() -> None:
    with _memo_lock:
        _memo.clear()
        _fill_locks.clear()


def queries_up_to(max_k: int) -> list[CoeffQuery]:
    """All valid ``(j, k, n)`` with ``k <= max_k``."""
    return [
        CoeffQuery(j, k, n)
        for k in range(max_k + 1)
        for j in range(k + 1)
        for n in range(j // 2 + 1)
    ]
