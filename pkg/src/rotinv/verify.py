"""
Verification harness: every check produces one ``CheckResult`` per (suite, item).

Checks fan out over a ``ThreadPoolExecutor``; the report is sorted by suite and
item so the same command always prints the same document.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .angular import clebsch_gordan, wigner3j, wigner3j_permutation_phase
from .coeffs import (
    KINDS,
    CoeffQuery,
    coeff_table,
    laplace_residuals,
    queries_up_to,
    region_boundary_checks,
)
from .exactnum import SurdSum
from .golden import compare, load_golden
from .invariant import (
    InvariantSpec,
    build_invariant,
    canonical_specs,
    evaluate,
    evaluate_float,
    to_cartesian,
    zeta_squared_poly,
)
from .oracle import (
    DegenerateGeometryError,
    appendix_eval,
    config_from_vectors,
    definition_invariant,
    jacobi,
    jacobi_recurrence,
    random_configuration,
    random_rotation,
)
from .settings import Tolerances, VerifyOptions
from .solidharm import CartesianPoly, laplacian, multiply_terms, triple_product_terms

_logger = logging.getLogger(__name__)

SUITES: tuple[str, ...] = (
    "laplace",
    "oracle",
    "recursion",
    "golden",
    "symmetry",
    "appendix",
    "integrality",
    "threej",
)

# label-sum ceilings of the expensive suites
ORACLE_MAX_SUM = 14
APPENDIX_MAX_SUM = 12
ROTATION_MAX_SUM = 8
THREEJ_MAX_L = 8
JACOBI_MAX_N = 12
JACOBI_MAX_ALPHA = 8


@dataclass(frozen=True)
class CheckResult:
    spec: str
    suite: str
    status: str  # pass | fail | waived
    detail: str = ""


@dataclass
class VerifyReport:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if r.status == "fail"]

    @property
    def waivers(self) -> list[CheckResult]:
        return [r for r in self.results if r.status == "waived"]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> str:
        return json.dumps([asdict(r) for r in self.results], indent=2)

    def summary(self) -> str:
        passed = sum(1 for r in self.results if r.status == "pass")
        return f"{passed} passed, {len(self.failures)} failed, {len(self.waivers)} waived"


def normalize_suites(value: Union[None, str, Sequence[str]]) -> list[str]:
    """
    Normalize a ``--suite`` value to suite names in canonical order.

    Accepts ``all``, a single name, a comma-separated string or a list of those.
    """
    if value is None:
        return list(SUITES)
    items: Iterable[str]
    if isinstance(value, str):
        items = value.split(",")
    else:
        items = [part for v in value for part in str(v).split(",")]
    chosen: set[str] = set()
    for item in items:
        s = item.strip().lower()
        if not s:
            continue
        if s == "all":
            chosen.update(SUITES)
        elif s in SUITES:
            chosen.add(s)
        else:
            raise ValueError(f"Invalid suite {item!r}; use all or one of {', '.join(SUITES)}.")
    if not chosen:
        raise ValueError("no suite selected")
    return [s for s in SUITES if s in chosen]


def _label(spec: InvariantSpec) -> str:
    return f"{spec.j},{spec.k},{spec.l}"


def _close(actual: complex, expected: complex, rtol: float) -> bool:
    return abs(actual - expected) <= rtol * max(1.0, abs(expected))


# -- individual checks (each returns results for one item) ----------------------


def check_laplace(spec: InvariantSpec) -> list[CheckResult]:
    cart = to_cartesian(build_invariant(*spec.labels))
    bad = [slot for slot in (1, 2, 3) if not laplacian(cart, slot).is_zero()]
    if bad:
        return [CheckResult(_label(spec), "laplace", "fail", f"laplacian nonzero in slots {bad}")]
    return [CheckResult(_label(spec), "laplace", "pass", "harmonic in all three vectors")]


def check_oracle(spec: InvariantSpec) -> list[CheckResult]:
    built = to_cartesian(build_invariant(*spec.labels))
    reference = definition_invariant(spec)
    if built == reference:
        return [CheckResult(_label(spec), "oracle", "pass", f"{len(built)} Cartesian terms agree")]
    diff = built - reference
    return [CheckResult(_label(spec), "oracle", "fail", f"{len(diff)} Cartesian terms differ")]


def check_recursion(j: int, k: int, n: int) -> list[CheckResult]:
    q = CoeffQuery(j, k, n)
    out: list[CheckResult] = []
    for kind in KINDS:
        label = f"{kind} {j},{k},{n}"
        closed = coeff_table(q, kind, "closed")
        problems: list[str] = []
        if closed != coeff_table(q, kind, "recursive"):
            problems.append("closed form and recursion disagree")
        residuals = laplace_residuals(closed)
        if residuals:
            problems.append(f"{len(residuals)} Laplace relations violated, first {residuals[0][:2]}")
        boundary = region_boundary_checks(q, kind)
        if boundary:
            problems.append(f"{len(boundary)} region boundaries disagree, first {boundary[0][:2]}")
        status = "fail" if problems else "pass"
        out.append(CheckResult(label, "recursion", status, "; ".join(problems) or "closed == recursive"))
    return out


def check_integrality(j: int, k: int, n: int) -> list[CheckResult]:
    q = CoeffQuery(j, k, n)
    out: list[CheckResult] = []
    for kind in KINDS:
        bad = coeff_table(q, kind).non_integral()
        label = f"{kind} {j},{k},{n}"
        if bad:
            out.append(CheckResult(label, "integrality", "fail", f"non-integer entries at {bad}"))
        else:
            out.append(CheckResult(label, "integrality", "pass", "all entries integral"))
    return out


def check_symmetry(spec: InvariantSpec, options: VerifyOptions, tol: Tolerances) -> list[CheckResult]:
    label = _label(spec)
    inv = build_invariant(*spec.labels)
    cart = to_cartesian(inv)
    phase = wigner3j_permutation_phase(*spec.labels)
    out: list[CheckResult] = []

    def record(name: str, ok: bool, detail: str) -> None:
        out.append(CheckResult(f"{label} {name}", "symmetry", "pass" if ok else "fail", detail))

    record("parity", cart.reflect() == cart.scale(phase), "r -> -r scales by (-1)^(j+k+l)")
    if inv.imaginary:
        record("reality", cart.is_imaginary(), "odd invariant is purely imaginary")
    else:
        record("reality", cart.is_real(), "even invariant is real")
    swapped = to_cartesian(build_invariant(spec.k, spec.j, spec.l))
    record(
        "permutation",
        swapped == cart.relabel({1: 2, 2: 1, 3: 3}).scale(phase),
        "I_{k,j,l}(r1,r2,r3) = (-1)^(j+k+l) I_{j,k,l}(r2,r1,r3)",
    )
    if spec.j + spec.k + spec.l <= ROTATION_MAX_SUM:
        rng = np.random.default_rng([options.seed, *spec.labels])
        worst = 0.0
        for _ in range(options.rotations):
            r1, r2, r3 = random_configuration(rng)
            rot = random_rotation(rng)
            base = evaluate_float(inv, r1, r2, r3)
            moved = evaluate_float(inv, rot @ r1, rot @ r2, rot @ r3)
            worst = max(worst, abs(moved - base) / max(1.0, abs(base)))
        record("rotation", worst <= tol.rotation_rtol, f"max relative change {worst:.2e}")
    return out


def check_zeta_identity() -> list[CheckResult]:
    lhs = multiply_terms(triple_product_terms(), triple_product_terms())
    rhs = zeta_squared_poly().to_cartesian_terms()
    diff = CartesianPoly.from_rational(
        {m: lhs.get(m, Fraction(0)) - rhs.get(m, Fraction(0)) for m in set(lhs) | set(rhs)},
        (2, 2, 2),
    )
    ok = diff.is_zero()
    return [CheckResult("zeta^2", "symmetry", "pass" if ok else "fail", "ζ² identity expands to zero")]


def check_appendix(spec: InvariantSpec, options: VerifyOptions, tol: Tolerances) -> list[CheckResult]:
    inv = build_invariant(*spec.labels)
    rng = np.random.default_rng([options.seed, 7, *spec.labels])
    worst = 0.0
    done = 0
    while done < options.samples:
        r1, r2, r3 = random_configuration(rng)
        try:
            cfg = config_from_vectors(r1, r2, r3, collinear_tol=tol.collinear_tol)
            approx = appendix_eval(spec, cfg, collinear_tol=tol.collinear_tol)
        except DegenerateGeometryError:
            continue
        exact = complex(
            evaluate(
                inv,
                [Fraction(float(x)) for x in r1],
                [Fraction(float(x)) for x in r2],
                [Fraction(float(x)) for x in r3],
            )
        )
        worst = max(worst, abs(approx - exact) / max(1.0, abs(exact)))
        done += 1
    ok = worst <= tol.appendix_rtol
    return [
        CheckResult(
            _label(spec),
            "appendix",
            "pass" if ok else "fail",
            f"{done} configurations, max relative error {worst:.2e}",
        )
    ]


def check_jacobi(n: int, alpha: int, tol: Tolerances) -> list[CheckResult]:
    worst = 0.0
    for x in np.linspace(-1.0, 1.0, 21):
        direct = jacobi(n, alpha, alpha, float(x))
        ref = jacobi_recurrence(n, alpha, alpha, float(x))
        worst = max(worst, abs(direct - ref) / max(1.0, abs(ref)))
    ok = worst <= tol.jacobi_rtol
    return [
        CheckResult(f"jacobi {n},{alpha}", "appendix", "pass" if ok else "fail", f"max relative error {worst:.2e}")
    ]


def check_threej(j1: int, j2: int) -> list[CheckResult]:
    """Orthogonality over ``m1`` at ``m3 = 0``, permutation phases and a CG sum rule."""
    label = f"{j1},{j2}"
    problems: list[str] = []
    lows = range(abs(j1 - j2), j1 + j2 + 1)
    for j3 in lows:
        for j3b in lows:
            total = SurdSum()
            for m1 in range(-min(j1, j2), min(j1, j2) + 1):
                total += wigner3j(j1, j2, j3, m1, -m1, 0) * wigner3j(j1, j2, j3b, m1, -m1, 0)
            expected = Fraction(1, 2 * j3 + 1) if j3 == j3b else Fraction(0)
            if total != expected:
                problems.append(f"orthogonality ({j3},{j3b})")
        phase = wigner3j_permutation_phase(j1, j2, j3)
        for m1 in range(-j1, j1 + 1):
            for m2 in range(-j2, j2 + 1):
                m3 = -m1 - m2
                if abs(m3) > j3:
                    continue
                w = wigner3j(j1, j2, j3, m1, m2, m3)
                if wigner3j(j2, j1, j3, m2, m1, m3) != w * phase:
                    problems.append(f"swap phase ({j3};{m1},{m2})")
                if wigner3j(j2, j3, j1, m2, m3, m1) != w:
                    problems.append(f"cyclic ({j3};{m1},{m2})")
                if wigner3j(j1, j2, j3, -m1, -m2, -m3) != w * phase:
                    problems.append(f"m-reversal ({j3};{m1},{m2})")
        cg = SurdSum()
        for m1 in range(-min(j1, j2), min(j1, j2) + 1):
            c = clebsch_gordan(j1, m1, j2, -m1, j3, 0)
            cg += c * c
        if cg != 1:
            problems.append(f"CG normalization J={j3}")
    if problems:
        return [CheckResult(label, "threej", "fail", ", ".join(problems[:5]))]
    return [CheckResult(label, "threej", "pass", "orthogonality and phases exact")]


def check_golden() -> list[CheckResult]:
    out = []
    for entry in load_golden():
        res = compare(entry)
        out.append(CheckResult(_label(res.spec), "golden", res.status, res.detail))
    return out


# -- orchestration ---------------------------------------------------------------


Task = Callable[[], list[CheckResult]]


def _plan(suite: str, max_l: int, options: VerifyOptions, tol: Tolerances) -> list[tuple[str, Task]]:
    specs = canonical_specs(max_l=max_l)
    tasks: list[tuple[str, Task]] = []
    if suite == "laplace":
        tasks = [(_label(s), lambda s=s: check_laplace(s)) for s in specs]
    elif suite == "oracle":
        tasks = [
            (_label(s), lambda s=s: check_oracle(s))
            for s in specs
            if s.j + s.k + s.l <= ORACLE_MAX_SUM
        ]
    elif suite == "recursion":
        tasks = [
            (f"{q.j},{q.k},{q.n}", lambda q=q: check_recursion(q.j, q.k, q.n))
            for q in queries_up_to(max_l)
        ]
    elif suite == "integrality":
        tasks = [
            (f"{q.j},{q.k},{q.n}", lambda q=q: check_integrality(q.j, q.k, q.n))
            for q in queries_up_to(max_l)
        ]
    elif suite == "golden":
        tasks = [("golden", check_golden)]
    elif suite == "symmetry":
        tasks = [(_label(s), lambda s=s: check_symmetry(s, options, tol)) for s in specs]
        tasks.append(("zeta^2", check_zeta_identity))
    elif suite == "appendix":
        tasks = [
            (_label(s), lambda s=s: check_appendix(s, options, tol))
            for s in specs
            if s.j + s.k + s.l <= APPENDIX_MAX_SUM
        ]
        top = min(JACOBI_MAX_N, max_l)
        tasks += [
            (f"jacobi {n},{a}", lambda n=n, a=a: check_jacobi(n, a, tol))
            for n in range(top + 1)
            for a in range(min(JACOBI_MAX_ALPHA, max_l) + 1)
        ]
    elif suite == "threej":
        top = min(THREEJ_MAX_L, max_l)
        tasks = [
            (f"{j1},{j2}", lambda j1=j1, j2=j2: check_threej(j1, j2))
            for j2 in range(top + 1)
            for j1 in range(j2 + 1)
        ]
    else:
        raise ValueError(f"unknown suite {suite!r}")
    return tasks


def run_verify(
    max_l: int,
    suites: Union[None, str, Sequence[str]] = None,
    *,
    options: VerifyOptions | None = None,
    tolerances: Tolerances | None = None,
) -> VerifyReport:
    """Run the selected suites over every canonical spec with labels ``<= max_l``."""
    if max_l < 0:
        raise ValueError(f"max_l must be >= 0, got {max_l!r}")
    options = options or VerifyOptions()
    tol = tolerances or Tolerances()
    chosen = normalize_suites(suites)
    tasks = [(suite, item, fn) for suite in chosen for item, fn in _plan(suite, max_l, options, tol)]
    _logger.info("verify: %d tasks across %s (max_l=%d)", len(tasks), ",".join(chosen), max_l)
    results: list[CheckResult] = []
    with ThreadPoolExecutor(max_workers=max(1, options.workers)) as pool:
        futs = {pool.submit(fn): (suite, item) for suite, item, fn in tasks}
        for fut in as_completed(futs):
            suite, item = futs[fut]
            try:
                results.extend(fut.result())
            except Exception as exc:
                _logger.error("verify %s %s raised: %s", suite, item, exc, exc_info=True)
                results.append(CheckResult(item, suite, "fail", f"{type(exc).__name__}: {exc}"))
    order = {s: i for i, s in enumerate(SUITES)}
    results.sort(key=lambda r: (order[r.suite], _sort_key(r.spec)))
    for r in results:
        if r.status == "waived":
            _logger.warning("waived %s %s: %s", r.suite, r.spec, r.detail)
    return VerifyReport(results)


def _sort_key(label: str) -> tuple:
    parts = label.replace(",", " ").split()
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts)
