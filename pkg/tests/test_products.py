"""Unit tests for factor products: convergence factors, divisor
realization, polynomial factorization, roots of exponentials, and the
geometric-exponent family."""

import math

import numpy as np
import pytest

from sliceregular.divisors import Sphere, SphericalDivisor, div, sord
from sliceregular.errors import (
    BudgetExceededError,
    InputError,
    NegativeMultiplicityError,
    ZeroFunctionError,
)
from sliceregular.products import (
    EntireEvaluator,
    Factor,
    construct_from_divisor,
    convergence_factor,
    exp_poly_root,
    factorize_polynomial,
    isssa_family,
)
from sliceregular.quaternions import UNIT_I, Quaternion, UnitImaginary, slice_decompose
from sliceregular.series import RegularSeries


def poly(*coeffs):
    return RegularSeries.from_real_coeffs(coeffs)


class TestConvergenceFactor:
    def test_order_zero_is_one(self):
        assert convergence_factor(0, 3.0, Quaternion(5, 1, 2, 3)) == Quaternion(1)

    def test_exp_of_zero(self):
        assert convergence_factor(1, 1.0, Quaternion(0)) == Quaternion(1)

    def test_scalar_value(self):
        got = convergence_factor(2, 2.0, Quaternion(1))
        assert got.isclose(Quaternion(math.exp(0.625)), 1e-14)

    def test_zero_parameter_rejected(self):
        with pytest.raises(InputError):
            convergence_factor(1, 0.0, Quaternion(1))

    def test_never_vanishes(self):
        rng = np.random.default_rng(31)
        for _ in range(1000):
            n = int(rng.integers(0, 7))
            q = Quaternion(*rng.uniform(-6, 6, 4))
            if abs(q) > 10:
                q = q * (10 / abs(q))
            # the factor belongs to a zero at a, used where |q| < |a|
            a = float(rng.uniform(1.0, 3.0)) * max(1.0, abs(q)) * (
                1 if rng.random() < 0.5 else -1
            )
            assert abs(convergence_factor(n, a, q)) > 0.0


class TestConstructFromDivisor:
    def test_single_real_zero(self):
        ev = construct_from_divisor(SphericalDivisor([(Sphere(3, 0), 1)]))
        assert abs(ev.evaluate(Quaternion(3))) == 0.0
        assert ev.evaluate(Quaternion(0)) == Quaternion(1)

    def test_spherical_zero_everywhere_on_sphere(self):
        ev = construct_from_divisor(SphericalDivisor([(Sphere(0, 1), 1)]))
        assert abs(ev.evaluate(Quaternion(0, 1, 0, 0))) <= 1e-15
        assert abs(ev.evaluate(Quaternion(0, 0, 1, 0))) <= 1e-15
        assert ev.evaluate(Quaternion(0)) == Quaternion(1)

    def test_empty_divisor_is_constant_one(self):
        ev = construct_from_divisor(SphericalDivisor.empty())
        assert ev.evaluate(Quaternion(2, 1, 1, 1)) == Quaternion(1)

    def test_negative_multiplicity_rejected(self):
        with pytest.raises(NegativeMultiplicityError):
            construct_from_divisor(SphericalDivisor([(Sphere(1, 0), -1)]))

    def test_origin_power(self):
        ev = construct_from_divisor(SphericalDivisor([(Sphere(0, 0), 3)]))
        assert ev.evaluate(Quaternion(2)) == Quaternion(8)

    def test_divisor_roundtrip(self):
        d = SphericalDivisor(
            [(Sphere(0, 0), 2), (Sphere(-1.5, 0), 1), (Sphere(0.5, 1.0), 3)]
        )
        for genus in (0, 1, 2):
            ev = construct_from_divisor(d, genus=genus)
            assert div(ev.polynomial_part()) == d
            assert ev.zero_divisor() == d

    def test_slice_preservation(self):
        d = SphericalDivisor([(Sphere(1, 0.5), 2), (Sphere(-2, 0), 1)])
        ev = construct_from_divisor(d, genus=2)
        rng = np.random.default_rng(12)
        for _ in range(20):
            v = rng.normal(size=3)
            unit = UnitImaginary(*(v / np.linalg.norm(v)))
            q = Quaternion(rng.uniform(-2, 2)) + unit * rng.uniform(0.1, 2)
            value = ev.evaluate(q)
            # the component off the (1, unit) plane must vanish
            ortho = value.imag() - unit * value.imag().dot(unit)
            assert ortho.imag_norm() <= 1e-9 * max(1.0, abs(value))

    def test_factor_commutation(self):
        d = SphericalDivisor([(Sphere(1, 0.5), 1), (Sphere(-2, 0), 2), (Sphere(0, 0), 1)])
        ev = construct_from_divisor(d, genus=1)
        rng = np.random.default_rng(14)
        reordered = EntireEvaluator(tuple(reversed(ev.factors)))
        shuffled = list(ev.factors)
        rng.shuffle(shuffled)
        shuffled = EntireEvaluator(shuffled)
        for _ in range(10):
            q = Quaternion(*rng.uniform(-1.5, 1.5, 4))
            a, b, c = ev.evaluate(q), reordered.evaluate(q), shuffled.evaluate(q)
            assert abs(a - b) <= 1e-10 * max(1.0, abs(a))
            assert abs(a - c) <= 1e-10 * max(1.0, abs(a))


class TestFactorization:
    def test_cubic(self):
        fac = factorize_polynomial(poly(0, -1, 0, 1))
        assert fac.m == 1
        assert sorted(b for b, _ in fac.real_factors) == [-1.0, 1.0]
        assert fac.spherical_factors == ()
        assert fac.h == 1.0

    def test_irreducible_quadratic(self):
        fac = factorize_polynomial(poly(1, 0, 1))
        assert fac.m == 0
        assert fac.real_factors == ()
        ((x, y, mult),) = fac.spherical_factors
        assert (x, y, mult) == pytest.approx((0.0, 1.0, 1))

    def test_constant(self):
        fac = factorize_polynomial(poly(5))
        assert (fac.m, fac.real_factors, fac.spherical_factors, fac.h) == (0, (), (), 5.0)

    def test_reconstruction_matches(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            c = np.array([rng.uniform(0.5, 2.0)])
            for _ in range(int(rng.integers(1, 4))):
                if rng.random() < 0.5:
                    c = np.convolve(c, [-rng.uniform(-2, 2), 1.0])
                else:
                    x, y = rng.uniform(-1.5, 1.5), rng.uniform(0.3, 1.5)
                    c = np.convolve(c, [x * x + y * y, -2 * x, 1.0])
            f = RegularSeries.from_real_coeffs(c)
            rebuilt = factorize_polynomial(f).reconstruct()
            assert rebuilt.allclose(f, 1e-8)

    def test_zero_rejected(self):
        with pytest.raises(ZeroFunctionError):
            factorize_polynomial(RegularSeries([]))


class TestExpPolyRoot:
    def test_square_root_at_one(self):
        root = exp_poly_root([0, 0, 1.0], 2)  # P = q^2
        got = root.evaluate(Quaternion(1)) ** 2
        assert got.isclose(Quaternion(math.e), 1e-14)

    def test_zero_polynomial(self):
        root = exp_poly_root([0.0], 4)
        assert root.evaluate(Quaternion(2, 1, 0, 0)) == Quaternion(1)

    def test_euler_slice_value(self):
        root = exp_poly_root([0, 1.0], 3)  # P = q
        got = root.evaluate(Quaternion(0, math.pi, 0, 0)) ** 3
        assert got.isclose(Quaternion(-1), 1e-13)

    def test_bad_index(self):
        with pytest.raises(InputError):
            exp_poly_root([0, 1.0], 0)

    def test_slice_preserving(self):
        root = exp_poly_root([0.5, -1.0, 0.25], 5)
        q = Quaternion(0.3, 0, 1.2, 0)
        value = root.evaluate(q)
        assert value.x == 0.0 and value.z == 0.0


class TestGeometricExponentFamily:
    def test_zero_placement(self):
        fam = isssa_family(2, 2, 3)
        assert abs(fam.full_product.evaluate(Quaternion(1))) == 0.0
        assert abs(fam.full_product.evaluate(Quaternion(0.5))) > 0.0

    def test_all_parts_are_one_at_zero(self):
        fam = isssa_family(2, 2, 3)
        for ev in (fam.full_product, fam.tail_product, fam.head_balanced, fam.root):
            assert ev.evaluate(Quaternion(0)) == Quaternion(1)
        for g in fam.head_roots:
            assert g.evaluate(Quaternion(0)) == Quaternion(1)

    def test_root_identity(self):
        fam = isssa_family(2, 2, 3)
        rng = np.random.default_rng(2)
        for _ in range(20):
            q = Quaternion(*rng.uniform(-0.2, 0.2, 4))
            lhs = fam.head_balanced.evaluate(q)
            rhs = fam.root_side(q)
            assert abs(lhs - rhs) <= 1e-6 * abs(lhs)

    def test_multiplicities_by_deflation(self):
        part = isssa_family(2, 2, 3).full_product.polynomial_part()
        assert sord(part, Sphere(1, 0)) == 2
        assert sord(part, Sphere(2, 0)) == 4
        assert sord(part, Sphere(3, 0)) == 8

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            isssa_family(2, 2, 13)

    def test_parameter_validation(self):
        with pytest.raises(InputError):
            isssa_family(1, 2, 3)
        with pytest.raises(InputError):
            isssa_family(2, 2, 1)


class TestEvaluatorSurface:
    def test_json_roundtrip(self):
        ev = construct_from_divisor(
            SphericalDivisor([(Sphere(1, 0.5), 2), (Sphere(-1, 0), 1)]), genus=2
        )
        rebuilt = EntireEvaluator.from_json(ev.to_json())
        q = Quaternion(0.3, 0.7, -0.2, 0.1)
        assert rebuilt.evaluate(q).isclose(ev.evaluate(q), 1e-14)

    def test_polynomial_part_degree_cap(self):
        ev = EntireEvaluator([Factor("linear", exponent=600, b=1.0)])
        with pytest.raises(InputError):
            ev.polynomial_part()

    def test_negative_exponent_has_no_polynomial_part(self):
        ev = EntireEvaluator([Factor("linear", exponent=-1, b=1.0)])
        with pytest.raises(InputError):
            ev.polynomial_part()
