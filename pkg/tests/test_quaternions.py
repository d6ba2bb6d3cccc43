"""Unit tests for quaternion arithmetic and the slice decomposition."""

import math

import pytest
from hypothesis import given, strategies as st

from sliceregular.errors import InputError
from sliceregular.quaternions import (
    UNIT_I,
    UNIT_J,
    UNIT_K,
    Quaternion,
    UnitImaginary,
    exp_quaternion,
    inner_cross,
    mul,
    slice_decompose,
    slice_transfer,
    unit_power,
)

finite = st.floats(min_value=-10, max_value=10, allow_nan=False)
quaternions = st.builds(Quaternion, finite, finite, finite, finite)


class TestHamiltonProduct:
    def test_defining_relations(self):
        assert UNIT_I * UNIT_J == Quaternion(0, 0, 0, 1)
        assert UNIT_J * UNIT_I == Quaternion(0, 0, 0, -1)
        assert UNIT_J * UNIT_K == Quaternion(0, 1, 0, 0)
        for unit in (UNIT_I, UNIT_J, UNIT_K):
            assert unit * unit == Quaternion(-1)

    def test_identity(self):
        q = Quaternion(0.3, -1.2, 4.0, 2.5)
        assert q * Quaternion(1) == q
        assert mul(q, 1.0) == q

    def test_bilinear_expansion(self):
        # (1+i)(1+j) = 1 + i + j + ij = 1 + i + j + k
        got = Quaternion(1, 1, 0, 0) * Quaternion(1, 0, 1, 0)
        assert got == Quaternion(1, 1, 1, 1)

    @given(quaternions, quaternions, quaternions)
    def test_associative(self, a, b, c):
        lhs = (a * b) * c
        rhs = a * (b * c)
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(a) * abs(b) * abs(c))

    @given(quaternions, quaternions, quaternions)
    def test_distributes(self, a, b, c):
        lhs = a * (b + c)
        rhs = a * b + a * c
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(a) * (abs(b) + abs(c)))


class TestConjNormInverse:
    def test_conjugate_and_modulus(self):
        q = Quaternion(1, 2, 0, 0)
        assert q.conjugate() == Quaternion(1, -2, 0, 0)
        assert abs(q) == pytest.approx(math.sqrt(5))

    def test_unit_inverse(self):
        assert UNIT_I.inverse() == Quaternion(0, -1, 0, 0)

    def test_inverse_of_ones(self):
        q = Quaternion(1, 1, 1, 1)
        assert abs(q) == 2.0
        inv = q.inverse()
        assert inv == Quaternion(0.25, -0.25, -0.25, -0.25)
        assert (q * inv).isclose(Quaternion(1), 1e-15)

    def test_zero_inverse_raises(self):
        with pytest.raises(ZeroDivisionError):
            Quaternion().inverse()

    @given(quaternions)
    def test_mul_inverse_is_one(self, q):
        if abs(q) < 1e-3:
            return
        assert (q * q.inverse()).isclose(Quaternion(1), 1e-12)

    @given(quaternions)
    def test_conj_product_is_norm_sq(self, q):
        p = q * q.conjugate()
        assert p.imag().imag_norm() <= 1e-12 * max(1.0, q.norm_sq())
        assert p.w == pytest.approx(q.norm_sq(), rel=1e-12)


class TestSliceDecomposition:
    def test_basic(self):
        x, y, unit = slice_decompose(Quaternion(3, 4, 0, 0))
        assert (x, y) == (3.0, 4.0)
        assert unit == UNIT_I

    def test_real_returns_none(self):
        assert slice_decompose(Quaternion(7)) == (7.0, 0.0, None)

    def test_diagonal(self):
        x, y, unit = slice_decompose(Quaternion(1, 1, 1, 1))
        assert x == 1.0
        assert y == pytest.approx(math.sqrt(3))
        s = 1 / math.sqrt(3)
        assert abs(unit - Quaternion(0, s, s, s)) <= 1e-15
        assert (unit * unit).isclose(Quaternion(-1), 1e-15)

    @given(quaternions)
    def test_reconstruction(self, q):
        x, y, unit = slice_decompose(q)
        rebuilt = Quaternion(x) if unit is None else Quaternion(x) + unit * y
        assert abs(rebuilt - q) <= 1e-12 * max(1.0, abs(q))


class TestSliceTransfer:
    def test_examples(self):
        assert slice_transfer(Quaternion(2, 3, 0, 0), UNIT_J) == Quaternion(2, 0, 3, 0)
        assert slice_transfer(Quaternion(5), UNIT_K) == Quaternion(5)

    def test_idempotent(self):
        q = Quaternion(0.5, -1, 2, 0.25)
        once = slice_transfer(q, UNIT_J)
        assert slice_transfer(once, UNIT_J) == once

    @given(quaternions)
    def test_preserves_real_and_modulus(self, q):
        t = slice_transfer(q, UNIT_K)
        assert t.w == q.w
        assert t.imag_norm() == pytest.approx(q.imag_norm(), abs=1e-13)

    def test_own_unit_is_identity(self):
        q = Quaternion(0.5, -1, 2, 0.25)
        _, _, unit = slice_decompose(q)
        assert slice_transfer(q, unit).isclose(q, 1e-14)


class TestInnerCross:
    def test_orthogonal_standard_units(self):
        inner, cross = inner_cross(UNIT_I, UNIT_J)
        assert inner == 0.0
        assert cross == Quaternion(0, 0, 0, 1)

    def test_self_product(self):
        inner, cross = inner_cross(UNIT_I, UNIT_I)
        assert inner == 1.0
        assert cross == Quaternion()

    def test_oblique_pair(self):
        # product identity pins the cross sign: IJ = -<I,J> + I x J
        s = 1 / math.sqrt(2)
        I = UnitImaginary(s, s, 0)
        inner, cross = inner_cross(I, UNIT_J)
        assert inner == pytest.approx(s)
        assert abs(cross - Quaternion(0, 0, 0, s)) <= 1e-15
        assert abs((I * UNIT_J) - (Quaternion(-inner) + cross)) <= 1e-15

    @given(st.tuples(finite, finite, finite), st.tuples(finite, finite, finite))
    def test_product_identity(self, u, v):
        nu = math.sqrt(sum(c * c for c in u))
        nv = math.sqrt(sum(c * c for c in v))
        if nu < 1e-3 or nv < 1e-3:
            return
        I = UnitImaginary(*(c / nu for c in u))
        J = UnitImaginary(*(c / nv for c in v))
        inner, cross = inner_cross(I, J)
        assert abs(I * J - (Quaternion(-inner) + cross)) <= 1e-14


class TestUnitPower:
    @pytest.mark.parametrize(
        "a, expected",
        [(0, Quaternion(1)), (1, UNIT_I + 0), (2, Quaternion(-1)),
         (3, Quaternion(0, -1, 0, 0)), (5, Quaternion(0, 1, 0, 0)),
         (-1, Quaternion(0, -1, 0, 0)), (-2, Quaternion(-1))],
    )
    def test_cycle(self, a, expected):
        assert unit_power(UNIT_I, a) == expected

    def test_j_inverse(self):
        assert unit_power(UNIT_J, -1) == Quaternion(0, 0, -1, 0)

    def test_additive_exponents(self):
        for a in range(-20, 21, 7):
            for b in range(-20, 21, 5):
                lhs = unit_power(UNIT_K, a) * unit_power(UNIT_K, b)
                assert abs(lhs - unit_power(UNIT_K, a + b)) <= 1e-15


class TestExponential:
    def test_zero(self):
        assert exp_quaternion(Quaternion()) == Quaternion(1)

    def test_euler_on_slice(self):
        got = exp_quaternion(UNIT_I * (math.pi / 2))
        assert got.isclose(Quaternion(0, 1, 0, 0), 1e-15)

    def test_one_plus_j(self):
        got = exp_quaternion(Quaternion(1, 0, 1, 0))
        want = Quaternion(math.e * math.cos(1), 0, math.e * math.sin(1), 0)
        assert got.isclose(want, 1e-14)

    def test_matches_series_partial_sums(self):
        q = Quaternion(1, 0, 1, 0)
        term = Quaternion(1)
        total = Quaternion(1)
        for n in range(1, 30):
            term = term * q * (1.0 / n)
            total = total + term
        assert abs(exp_quaternion(q) - total) <= 1e-12

    def test_slice_matches_complex_exp(self):
        import cmath

        q = Quaternion(0.3, 0, 0, -1.7)
        w = cmath.exp(complex(0.3, 1.7))
        got = exp_quaternion(q)
        assert got.w == pytest.approx(w.real, abs=1e-14)
        assert -got.z == pytest.approx(w.imag, abs=1e-14)


class TestUnitImaginary:
    def test_rejects_far_from_unit(self):
        with pytest.raises(InputError):
            UnitImaginary(1.1, 0, 0)

    def test_renormalizes_drift(self):
        u = UnitImaginary(1 + 5e-7, 0, 0)
        assert u.imag_norm() == pytest.approx(1.0, abs=1e-12)
        assert (u * u).isclose(Quaternion(-1), 1e-12)

    def test_json_roundtrip(self):
        u = UnitImaginary(0.6, 0.8, 0)
        assert UnitImaginary.from_json(u.to_json()) == u
        q = Quaternion(1, 2, 3, 4)
        assert Quaternion.from_json(q.to_json()) == q

    def test_json_rejects_nonfinite(self):
        with pytest.raises(InputError):
            Quaternion.from_json([1.0, float("inf"), 0.0, 0.0])
