"""
rotinv - exact rotational invariants of three spherical harmonic polynomials.

Main components:
- coeffs: closed-form and recursive coefficient tables A_abc / B_abc
- invariant: assembly, Cartesian expansion, evaluation and rendering of I_{j,k,l}
- oracle: defining 3-j contraction and the spherical-variable evaluator
- verify: verification suites behind ``rotinv verify``
"""

from __future__ import annotations

__all__ = ["build_invariant", "coeff_table", "render", "run_verify"]


def __getattr__(name: str):
    if name in ("build_invariant", "render"):
        from . import invariant

        return getattr(invariant, name)
    if name == "coeff_table":
        from .coeffs import coeff_table

        return coeff_table
    if name == "run_verify":
        from .verify import run_verify

        return run_verify
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
