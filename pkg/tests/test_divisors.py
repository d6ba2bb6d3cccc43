"""Unit tests for spherical divisors, orders, and star-polynomial zeros."""

import numpy as np
import pytest

from sliceregular.divisors import (
    Sphere,
    SphericalDivisor,
    div,
    divisor_add,
    holomorphy_check,
    sord,
    star_roots,
)
from sliceregular.errors import InputError, ZeroFunctionError
from sliceregular.quaternions import Quaternion, UnitImaginary
from sliceregular.rationals import SemiregularRational
from sliceregular.series import RegularSeries


def poly(*coeffs):
    return RegularSeries.from_real_coeffs(coeffs)


class TestSphere:
    def test_negative_radius_rejected(self):
        with pytest.raises(InputError):
            Sphere(0.0, -1.0)

    def test_real_point_factor(self):
        assert list(Sphere(3.0, 0.0).factor_coeffs()) == [-3.0, 1.0]

    def test_spherical_factor(self):
        assert list(Sphere(1.0, 2.0).factor_coeffs()) == [5.0, -2.0, 1.0]

    def test_merge_tolerance(self):
        assert Sphere(0.0, 1.0).close_to(Sphere(5e-9, 1.0 - 5e-9))
        assert not Sphere(0.0, 1.0).close_to(Sphere(1e-6, 1.0))


class TestDivisorGroup:
    def test_identity(self):
        d = SphericalDivisor([(Sphere(0, 1), 2)])
        assert d + SphericalDivisor.empty() == d

    def test_inverse_cancels(self):
        d = SphericalDivisor([(Sphere(0, 1), 2)])
        assert (d + (-d)).is_empty

    def test_pointwise_addition(self):
        d1 = SphericalDivisor([(Sphere(0, 1), 1), (Sphere(3, 0), 1)])
        d2 = SphericalDivisor([(Sphere(0, 1), 1)])
        total = divisor_add(d1, d2)
        assert total.multiplicity(Sphere(0, 1)) == 2
        assert total.multiplicity(Sphere(3, 0)) == 1

    def test_merges_close_spheres(self):
        d = SphericalDivisor([(Sphere(0, 1), 1), (Sphere(1e-9, 1.0 + 1e-9), 1)])
        assert len(d) == 1
        assert d.multiplicity(Sphere(0, 1)) == 2

    def test_json_roundtrip_sorted(self):
        d = SphericalDivisor([(Sphere(2, 0), 1), (Sphere(-1, 0.5), 3)])
        data = d.to_json()
        assert data == [{"x": -1.0, "y": 0.5, "mult": 3}, {"x": 2.0, "y": 0.0, "mult": 1}]
        assert SphericalDivisor.from_json(data) == d


class TestSord:
    def test_factor_counts(self):
        f = poly(1, 0, 1).star(poly(1, 0, 1)).star(poly(-3, 1))  # (q^2+1)^2 (q-3)
        assert sord(f, Sphere(0, 1)) == 2
        assert sord(f, Sphere(3, 0)) == 1
        assert sord(f, Sphere(5, 0)) == 0
        assert sord(f, Sphere(0, 2)) == 0

    def test_rational_pole_is_negative(self):
        r = SemiregularRational.from_real_coeffs([1, 0, 1], [-2, 1])
        assert sord(r, Sphere(2, 0)) == -1
        assert sord(r, Sphere(0, 1)) == 1

    def test_zero_function_rejected(self):
        with pytest.raises(ZeroFunctionError):
            sord(RegularSeries([]), Sphere(0, 0))

    def test_high_multiplicity_by_deflation(self):
        c = np.array([1.0])
        for a, e in ((1, 2), (2, 4), (3, 8)):
            for _ in range(e):
                c = np.convolve(c, [1.0, -1.0 / a])
        f = RegularSeries.from_real_coeffs(c)
        assert sord(f, Sphere(1, 0)) == 2
        assert sord(f, Sphere(2, 0)) == 4
        assert sord(f, Sphere(3, 0)) == 8

    def test_constant_on_sphere_across_units(self):
        # zeros at x + yI cluster identically for any I: sord sees (x, y) only
        f = poly(2, 0, 1)  # q^2 + 2, sphere (0, sqrt 2)
        s = Sphere(0.0, np.sqrt(2.0))
        assert sord(f, s) == 1
        rng = np.random.default_rng(8)
        for _ in range(10):
            v = rng.normal(size=3)
            unit = UnitImaginary(*(v / np.linalg.norm(v)))
            p = s.point(unit)
            assert abs(f.evaluate(p)) <= 1e-12


class TestDiv:
    def test_conjugate_pair_is_one_sphere(self):
        assert div(poly(1, 0, 1)) == SphericalDivisor([(Sphere(0, 1), 1)])

    def test_unit_has_empty_divisor(self):
        assert div(poly(5)).is_empty

    def test_cubic_with_real_roots(self):
        got = div(poly(0, -1, 0, 1))  # q^3 - q
        want = SphericalDivisor(
            [(Sphere(0, 0), 1), (Sphere(1, 0), 1), (Sphere(-1, 0), 1)]
        )
        assert got == want

    def test_multiplicities(self):
        f = poly(1, 0, 1).star(poly(1, 0, 1)).star(poly(0, 1)).star(poly(0, 1))
        got = div(f)
        assert got.multiplicity(Sphere(0, 1)) == 2
        assert got.multiplicity(Sphere(0, 0)) == 2

    def test_rational_divisor_subtracts(self):
        r = SemiregularRational.from_real_coeffs([1, 0, 1], [-2, 1])
        d = div(r)
        assert d.multiplicity(Sphere(0, 1)) == 1
        assert d.multiplicity(Sphere(2, 0)) == -1
        assert not d.is_positive

    def test_polynomial_divisors_positive(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            f = RegularSeries.from_real_coeffs(rng.uniform(-2, 2, rng.integers(2, 7)))
            if f.is_zero:
                continue
            assert div(f).is_positive


class TestHolomorphy:
    def test_pole_fails(self):
        r = SemiregularRational.from_real_coeffs([1, 0, 1], [-2, 1])
        assert not holomorphy_check(r)

    def test_cancellation_passes(self):
        num = poly(1, 0, 1).star(poly(-2, 1))
        r = SemiregularRational(num, poly(-2, 1))
        assert holomorphy_check(r)
        assert r.den.degree == 0

    def test_constant_is_holomorphic(self):
        assert holomorphy_check(SemiregularRational.constant(5.0))


class TestStarRoots:
    def test_isolated_zero_of_mixed_product(self):
        f = RegularSeries([Quaternion(0, -1, 0, 0), Quaternion(1)])  # q - i
        g = RegularSeries([Quaternion(0, 0, -1, 0), Quaternion(1)])  # q - j
        zeros = star_roots(f.star(g))
        assert len(zeros) == 1
        (zero,) = zeros
        assert zero.isolated
        assert zero.point.isclose(Quaternion(0, 1, 0, 0), 1e-9)

    def test_spherical_zero_detected(self):
        f = poly(1, 0, 1)  # q^2 + 1 vanishes on the whole sphere
        (zero,) = star_roots(f)
        assert not zero.isolated
        assert zero.sphere.close_to(Sphere(0, 1))

    def test_real_roots(self):
        zeros = star_roots(poly(-2, 1).star(poly(3, 1)))
        points = sorted(z.point.w for z in zeros)
        assert points == pytest.approx([-3.0, 2.0])

    def test_residuals_small_for_random_products(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            f = RegularSeries([Quaternion(*rng.uniform(-1.5, 1.5, 4)) for _ in range(3)])
            g = RegularSeries([Quaternion(*rng.uniform(-1.5, 1.5, 4)) for _ in range(3)])
            product = f.star(g)
            if product.degree < 1:
                continue
            for zero in star_roots(product):
                fp = f.evaluate(zero.point)
                if abs(fp) <= 1e-8:
                    continue
                moved = fp.inverse() * zero.point * fp
                assert abs(g.evaluate(moved)) <= 1e-7
