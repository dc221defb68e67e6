"""Wigner 3-j symbols, selection rules and Clebsch-Gordan coefficients."""

from fractions import Fraction

import pytest

from rotinv.angular import (
    TriangleRuleError,
    clebsch_gordan,
    require_triangle,
    selection_ok,
    triangle_ok,
    wigner3j,
    wigner3j_cache_info,
    wigner3j_permutation_phase,
)
from rotinv.exactnum import SurdSum


def test_triangle_rule():
    assert triangle_ok(1, 1, 2)
    assert not triangle_ok(1, 1, 3)
    assert not triangle_ok(-1, 1, 1)
    with pytest.raises(TriangleRuleError):
        require_triangle(1, 1, 3)


def test_selection_rules():
    assert selection_ok(1, 1, 1, 1, -1, 0)
    assert not selection_ok(1, 1, 1, 1, 0, 0)
    assert not selection_ok(1, 1, 1, 2, -2, 0)
    assert wigner3j(1, 1, 3, 0, 0, 0).is_zero()
    assert wigner3j(1, 1, 1, 1, 0, 0).is_zero()


@pytest.mark.parametrize(
    "args, expected",
    [
        ((0, 0, 0, 0, 0, 0), SurdSum.rational(1)),
        ((1, 1, 0, 0, 0, 0), SurdSum.sqrt_of(Fraction(1, 3), -1)),
        ((1, 1, 1, 1, -1, 0), SurdSum.sqrt_of(Fraction(1, 6))),
        ((1, 1, 2, 0, 0, 0), SurdSum.sqrt_of(Fraction(2, 15))),
        ((2, 2, 2, 0, 0, 0), SurdSum.sqrt_of(Fraction(2, 35), -1)),
        ((2, 2, 3, 1, -1, 0), SurdSum.sqrt_of(Fraction(2, 35))),
        ((1, 1, 1, 0, 0, 0), SurdSum()),
    ],
)
def test_known_values(args, expected):
    assert wigner3j(*args) == expected


def test_non_integer_arguments_rejected():
    with pytest.raises(TypeError):
        wigner3j(1, 1, 1, 0.5, -0.5, 0)  # type: ignore[arg-type]


def test_permutation_phases():
    for j, k, l in [(1, 2, 2), (2, 3, 4), (3, 3, 3)]:  # noqa: E741
        phase = wigner3j_permutation_phase(j, k, l)
        for mu in range(-j, j + 1):
            for nu in range(-k, k + 1):
                rho = -mu - nu
                if abs(rho) > l:
                    continue
                w = wigner3j(j, k, l, mu, nu, rho)
                assert wigner3j(k, j, l, nu, mu, rho) == w * phase
                assert wigner3j(k, l, j, nu, rho, mu) == w
                assert wigner3j(j, k, l, -mu, -nu, -rho) == w * phase


def test_permutation_phase_values():
    assert wigner3j_permutation_phase(1, 1, 1) == -1
    assert wigner3j_permutation_phase(1, 1, 2) == 1
    assert wigner3j_permutation_phase(0, 3, 3) == 1


def test_permuted_lookups_share_the_memo():
    first = wigner3j(7, 6, 4, 3, -1, -2)
    misses = wigner3j_cache_info().misses
    phase = wigner3j_permutation_phase(7, 6, 4)
    assert wigner3j(6, 4, 7, -1, -2, 3) == first
    assert wigner3j(6, 7, 4, -1, 3, -2) == first * phase
    assert wigner3j(7, 6, 4, -3, 1, 2) == first * phase
    assert wigner3j(4, 7, 6, -2, 3, -1) == first
    assert wigner3j_cache_info().misses == misses


def test_orthogonality_at_zero_projection():
    j1, j2 = 2, 3
    for j3 in range(1, 6):
        for j3b in range(1, 6):
            total = SurdSum()
            for m1 in range(-2, 3):
                total += wigner3j(j1, j2, j3, m1, -m1, 0) * wigner3j(j1, j2, j3b, m1, -m1, 0)
            assert total == (Fraction(1, 2 * j3 + 1) if j3 == j3b else 0)


def test_clebsch_gordan():
    assert clebsch_gordan(1, 1, 1, -1, 0, 0) == SurdSum.sqrt_of(Fraction(1, 3))
    assert clebsch_gordan(1, 1, 1, 0, 2, 1) == SurdSum.sqrt_of(Fraction(1, 2))
    total = SurdSum()
    for m1 in range(-2, 3):
        c = clebsch_gordan(2, m1, 2, -m1, 2, 0)
        total += c * c
    assert total == 1


def test_matches_sympy():
    wigner = pytest.importorskip("sympy.physics.wigner")
    for j in range(4):
        for k in range(4):
            for l in range(abs(j - k), j + k + 1):  # noqa: E741
                for mu in range(-j, j + 1):
                    for nu in range(-k, k + 1):
                        rho = -mu - nu
                        if abs(rho) > l:
                            continue
                        ref = float(wigner.wigner_3j(j, k, l, mu, nu, rho))
                        assert float(wigner3j(j, k, l, mu, nu, rho)) == pytest.approx(ref, abs=1e-12)
