"""Racah solid harmonics and Cartesian polynomial arithmetic."""

from fractions import Fraction

import pytest

from rotinv.exactnum import ComplexSurd, SurdSum
from rotinv.solidharm import (
    CartesianPoly,
    dot_poly,
    laplacian,
    place_in_slot,
    racah_solid_harmonic,
    triple_product_poly,
)


def test_degree_one_harmonics():
    z = racah_solid_harmonic(1, 0)
    assert z.terms == {place_in_slot((0, 0, 1), 1): ComplexSurd.real(1)}
    c11 = racah_solid_harmonic(1, 1)
    half = SurdSum.sqrt_of(Fraction(1, 2), -1)
    assert c11.coefficient(place_in_slot((1, 0, 0), 1)) == ComplexSurd.real(half)
    assert c11.coefficient(place_in_slot((0, 1, 0), 1)) == ComplexSurd.imag(half)


def test_degree_two_m_one():
    c21 = racah_solid_harmonic(2, 1)
    coef = SurdSum.sqrt_of(Fraction(3, 2), -1)
    assert len(c21) == 2
    assert c21.coefficient(place_in_slot((1, 0, 1), 1)) == ComplexSurd.real(coef)
    assert c21.coefficient(place_in_slot((0, 1, 1), 1)) == ComplexSurd.imag(coef)


def test_laplacian_of_squared_length():
    assert laplacian(dot_poly(1, 1), 1) == CartesianPoly.constant(6)
    assert laplacian(dot_poly(1, 1), 2).is_zero()


def test_harmonic_conjugation_symmetry():
    for l in range(4):  # noqa: E741
        for m in range(-l, l + 1):
            lhs = racah_solid_harmonic(l, -m).scale(-1 if m % 2 else 1)
            assert lhs == racah_solid_harmonic(l, m).conjugate()


def test_harmonics_are_harmonic():
    for l in range(5):  # noqa: E741
        for m in range(-l, l + 1):
            for slot in (1, 2, 3):
                assert laplacian(racah_solid_harmonic(l, m, slot), slot).is_zero()


def test_zonal_harmonic_has_unit_z_power():
    c30 = racah_solid_harmonic(3, 0, vector_slot=2)
    assert c30.coefficient(place_in_slot((0, 0, 3), 2)) == ComplexSurd.real(1)
    assert c30.degrees == (0, 3, 0)


def test_degree_mismatch_rejected():
    with pytest.raises(ValueError):
        CartesianPoly({place_in_slot((1, 0, 0), 1): ComplexSurd.real(1)}, (0, 1, 0))
    with pytest.raises(ValueError):
        place_in_slot((1, 0, 0), 4)


def test_scalar_products():
    h3 = dot_poly(1, 2)
    assert len(h3) == 3
    assert h3.degrees == (1, 1, 0)
    assert h3.evaluate([1, 2, 3], [4, 5, 6], [0, 0, 0]) == pytest.approx(32)
    zeta = triple_product_poly()
    assert len(zeta) == 6
    assert zeta.evaluate([1, 0, 0], [0, 1, 0], [0, 0, 1]) == pytest.approx(1)
    assert zeta.evaluate([0, 1, 0], [1, 0, 0], [0, 0, 1]) == pytest.approx(-1)


def test_relabel_and_reflect():
    h3 = dot_poly(1, 2)
    moved = h3.relabel({1: 3, 2: 2, 3: 1})
    assert moved == dot_poly(3, 2)
    assert moved.degrees == (0, 1, 1)
    assert h3.reflect() == h3
    assert triple_product_poly().reflect() == -triple_product_poly()
    with pytest.raises(ValueError):
        h3.relabel({1: 1, 2: 1, 3: 3})


def test_product_and_zero_comparison():
    p = dot_poly(1, 1) * dot_poly(2, 2)
    assert p.degrees == (2, 2, 0)
    assert (p - p).is_zero()
    assert (p - p) == CartesianPoly({}, (2, 2, 0))
