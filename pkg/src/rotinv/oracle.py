"""
Independent ground truth for the assembled invariants.

``definition_invariant`` contracts three Racah harmonics with a 3-j symbol exactly;
``appendix_eval`` evaluates the same invariant in floating point from lengths and
angles, after rotating ``r1`` onto the z axis and ``r2`` into the xz half-plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .angular import require_triangle, wigner3j
from .exactnum import SurdSum, binomial, factorial, squarefree_split
from .invariant import InvariantSpec
from .solidharm import CartesianMonomial, CartesianPoly, imag_power, solid_harmonic_real_form

DEFAULT_COLLINEAR_TOL = 1e-9


class DegenerateGeometryError(ValueError):
    """Zero-length or (near-)collinear vectors leave the azimuth undefined."""


def definition_invariant(spec: InvariantSpec) -> CartesianPoly:
    """``Σ_{μ,ν} (j k l; μ ν ρ) C^j_μ(r1) C^k_ν(r2) C^l_ρ(r3)`` with ``ρ = -μ-ν``."""
    j, k, l = spec.labels  # noqa: E741
    require_triangle(j, k, l)
    # monomial -> radicand -> rational; i^(total y exponent) applied once at the end
    acc: dict[CartesianMonomial, dict[int, Fraction]] = {}
    for mu in range(-j, j + 1):
        sk1, n1 = solid_harmonic_real_form(j, mu)
        for nu in range(-k, k + 1):
            rho = -mu - nu
            if abs(rho) > l:
                continue
            w = wigner3j(j, k, l, mu, nu, rho)
            if w.is_zero():
                continue
            wc, wm = w.single_term()
            sk2, n2 = solid_harmonic_real_form(k, nu)
            sk3, n3 = solid_harmonic_real_form(l, rho)
            s, m = squarefree_split(wm * n1 * n2 * n3)
            scale = wc * s
            for e1, f1 in sk1:
                c1 = scale * f1
                for e2, f2 in sk2:
                    c12 = c1 * f2
                    for e3, f3 in sk3:
                        mono = (*e1, *e2, *e3)
                        slot = acc.setdefault(mono, {})
                        slot[m] = slot.get(m, Fraction(0)) + c12 * f3
    terms = {}
    for mono, parts in acc.items():
        value = SurdSum(parts)
        if value.is_zero():
            continue
        terms[mono] = imag_power(mono[1] + mono[4] + mono[7], value)
    return CartesianPoly(terms, (j, k, l))


# -- Jacobi polynomials ---------------------------------------------------------


def jacobi(n: int, alpha: int, beta: int, x: float) -> float:
    """``P_n^(α,β)(x) = 2^-n Σ_m C(n+α, m) C(n+β, n-m) (x-1)^(n-m) (x+1)^m``."""
    if n < 0:
        raise ValueError(f"jacobi degree must be >= 0, got {n!r}")
    total = 0.0
    for m in range(n + 1):
        total += binomial(n + alpha, m) * binomial(n + beta, n - m) * (x - 1) ** (n - m) * (x + 1) ** m
    return total / 2**n


def jacobi_recurrence(n: int, alpha: int, beta: int, x: float) -> float:
    """Same polynomial by the standard three-term recurrence."""
    if n < 0:
        raise ValueError(f"jacobi degree must be >= 0, got {n!r}")
    prev = 1.0
    if n == 0:
        return prev
    cur = (alpha + 1) + (alpha + beta + 2) * (x - 1) / 2
    ab = alpha + beta
    for m in range(2, n + 1):
        c = 2 * m + ab
        a1 = 2 * m * (m + ab) * (c - 2)
        a2 = (c - 1) * (c * (c - 2) * x + alpha * alpha - beta * beta)
        a3 = 2 * (m + alpha - 1) * (m + beta - 1) * c
        prev, cur = cur, (a2 * cur - a3 * prev) / a1
    return cur


# -- spherical variables -----------------------------------------------------------


@dataclass(frozen=True)
class SphericalConfig:
    xi1: float
    xi2: float
    xi3: float
    theta12: float
    theta13: float
    theta23: float
    phi: float

    def __post_init__(self) -> None:
        for name in ("xi1", "xi2", "xi3"):
            if getattr(self, name) <= 0:
                raise DegenerateGeometryError(f"{name} must be positive, got {getattr(self, name)!r}")

    @property
    def zeta(self) -> float:
        return (
            math.sqrt(self.xi1 * self.xi2 * self.xi3)
            * math.sin(self.theta12)
            * math.sin(self.theta13)
            * math.sin(self.phi)
        )

    def consistency_error(self) -> float:
        """``|cos φ - (cos θ23 - cos θ12 cos θ13)/(sin θ12 sin θ13)|``."""
        denom = math.sin(self.theta12) * math.sin(self.theta13)
        if denom == 0.0:
            return 0.0
        expected = (
            math.cos(self.theta23) - math.cos(self.theta12) * math.cos(self.theta13)
        ) / denom
        return abs(math.cos(self.phi) - expected)


def _angle(cos_value: float) -> float:
    return math.acos(max(-1.0, min(1.0, cos_value)))


def config_from_vectors(
    r1, r2, r3, *, collinear_tol: float = DEFAULT_COLLINEAR_TOL
) -> SphericalConfig:
    """Lengths and angles of three vectors; ``φ`` signed so ``ζ`` keeps its sign."""
    vs = [np.asarray(v, dtype=float) for v in (r1, r2, r3)]
    xi = [float(np.dot(v, v)) for v in vs]
    for slot, value in enumerate(xi, start=1):
        if value == 0.0:
            raise DegenerateGeometryError(f"r{slot} has zero length")
    units = [v / math.sqrt(x) for v, x in zip(vs, xi)]
    # θ_ab pairs with η_c for the complementary index c
    c12 = float(np.dot(units[0], units[1]))
    c13 = float(np.dot(units[0], units[2]))
    c23 = float(np.dot(units[1], units[2]))
    ez = units[0]
    ex = units[1] - c12 * ez
    norm = float(np.linalg.norm(ex))
    if norm < collinear_tol:
        raise DegenerateGeometryError("r1 and r2 are collinear; azimuth undefined")
    ex /= norm
    ey = np.cross(ez, ex)
    phi = math.atan2(float(np.dot(units[2], ey)), float(np.dot(units[2], ex)))
    return SphericalConfig(
        xi1=xi[0],
        xi2=xi[1],
        xi3=xi[2],
        theta12=_angle(c12),
        theta13=_angle(c13),
        theta23=_angle(c23),
        phi=phi,
    )


def _sign(nu: int) -> int:
    return (nu > 0) - (nu < 0)


def _angular_sum(v: int, odd: bool, c12: float, c13: float, c23: float) -> float:
    """Multiple-angle factor of one ν term through the pairwise cosines.

    Even: ``(s12 s13)^v cos(vφ)``. Odd: ``(s12 s13)^(v-1) sin(vφ) / sin φ``.
    """
    base = c23 - c12 * c13
    sines = (1.0 - c12 * c12) * (1.0 - c13 * c13)
    total = 0.0
    if not odd:
        for r in range(v // 2 + 1):
            for s in range(r + 1):
                total += (
                    (-1) ** (r + s)
                    * binomial(v, 2 * r)
                    * binomial(r, s)
                    * base ** (v - 2 * r + 2 * s)
                    * sines ** (r - s)
                )
    else:
        for r in range((v - 1) // 2 + 1):
            for s in range(r + 1):
                total += (
                    (-1) ** (r + s)
                    * binomial(v, 2 * r + 1)
                    * binomial(r, s)
                    * base ** (v - 1 - 2 * r + 2 * s)
                    * sines ** (r - s)
                )
    return total


def appendix_eval(
    spec: InvariantSpec,
    cfg: SphericalConfig,
    *,
    collinear_tol: float = DEFAULT_COLLINEAR_TOL,
) -> complex:
    """Floating value of ``I_{j,k,l}`` from lengths and angles (ν-sum of Jacobi products)."""
    j, k, l = spec.labels  # noqa: E741
    require_triangle(j, k, l)
    s12 = math.sin(cfg.theta12)
    s13 = math.sin(cfg.theta13)
    if s12 * s13 < collinear_tol:
        raise DegenerateGeometryError(
            f"sin θ12 · sin θ13 = {s12 * s13:.3g} below {collinear_tol:g}; φ ill-conditioned"
        )
    c12 = math.cos(cfg.theta12)
    c13 = math.cos(cfg.theta13)
    c23 = math.cos(cfg.theta23)
    odd = spec.parity == "odd"
    total = 0.0
    for nu in range(-min(k, l), min(k, l) + 1):
        if odd and nu == 0:
            continue
        w = float(wigner3j(j, k, l, 0, nu, -nu))
        if w == 0.0:
            continue
        v = abs(nu)
        weight = math.sqrt(
            factorial(k - nu) * factorial(k + nu) * factorial(l - nu) * factorial(l + nu)
        ) / 4**v
        term = (
            (-1) ** nu
            * w
            * weight
            * jacobi(k - v, v, v, c12)
            * jacobi(l - v, v, v, c13)
            * _angular_sum(v, odd, c12, c13, c23)
        )
        total += _sign(nu) * term if odd else term
    norm = factorial(k) * factorial(l)
    if not odd:
        return complex(math.sqrt(cfg.xi1**j * cfg.xi2**k * cfg.xi3**l) * total / norm, 0.0)
    scale = math.sqrt(cfg.xi1 ** (j - 1) * cfg.xi2 ** (k - 1) * cfg.xi3 ** (l - 1)) / norm
    return complex(0.0, -cfg.zeta * scale * total)


def appendix_eval_direct(
    spec: InvariantSpec,
    cfg: SphericalConfig,
    *,
    collinear_tol: float = DEFAULT_COLLINEAR_TOL,
) -> complex:
    """The same ν-sum before the multiple-angle expansion, with ``e^{-iνφ}`` kept."""
    j, k, l = spec.labels  # noqa: E741
    require_triangle(j, k, l)
    s12 = math.sin(cfg.theta12)
    s13 = math.sin(cfg.theta13)
    if s12 * s13 < collinear_tol:
        raise DegenerateGeometryError(f"sin θ12 · sin θ13 = {s12 * s13:.3g} below {collinear_tol:g}")
    c12 = math.cos(cfg.theta12)
    c13 = math.cos(cfg.theta13)
    total = 0j
    for nu in range(-min(k, l), min(k, l) + 1):
        w = float(wigner3j(j, k, l, 0, nu, -nu))
        if w == 0.0:
            continue
        v = abs(nu)
        weight = math.sqrt(
            factorial(k - nu) * factorial(k + nu) * factorial(l - nu) * factorial(l + nu)
        ) / 4**v
        total += (
            (-1) ** nu
            * w
            * weight
            * (s12 * s13) ** v
            * jacobi(k - v, v, v, c12)
            * jacobi(l - v, v, v, c13)
            * complex(math.cos(nu * cfg.phi), -math.sin(nu * cfg.phi))
        )
    scale = math.sqrt(cfg.xi1**j * cfg.xi2**k * cfg.xi3**l) / (factorial(k) * factorial(l))
    return scale * total


# -- random inputs ---------------------------------------------------------------


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Haar-random proper rotation (QR of a Gaussian matrix, signs fixed)."""
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_configuration(
    rng: np.random.Generator, *, min_sine: float = 0.05
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Three vectors with unit-scale lengths and ``sin θ12 · sin θ13 >= min_sine``."""
    while True:
        vs = rng.standard_normal((3, 3))
        lengths = np.linalg.norm(vs, axis=1)
        if np.any(lengths < 1e-3):
            continue
        units = vs / lengths[:, None]
        c12 = float(np.dot(units[0], units[1]))
        c13 = float(np.dot(units[0], units[2]))
        if math.sqrt(max(0.0, 1 - c12 * c12) * max(0.0, 1 - c13 * c13)) >= min_sine:
            scale = rng.uniform(0.5, 2.0, size=3)
            return units[0] * scale[0], units[1] * scale[1], units[2] * scale[2]


__all__ = [
    "DEFAULT_COLLINEAR_TOL",
    "DegenerateGeometryError",
    "SphericalConfig",
    "appendix_eval",
    "appendix_eval_direct",
    "config_from_vectors",
    "definition_invariant",
    "jacobi",
    "jacobi_recurrence",
    "random_configuration",
    "random_rotation",
]
