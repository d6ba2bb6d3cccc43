"""Regular power series with right quaternion coefficients.

A series is the data ``sum_n (q - center)^n * a_n`` where the powers of
``(q - center)`` multiply the coefficients from the left.  Exact series are
polynomials; inexact ones are truncations of a longer expansion and carry
an optional convergence radius that evaluation enforces.

The star product of two series is the coefficient convolution
``c_n = sum_k a_k b_{n-k}`` with the left factor's coefficients kept on the
left.  The same product can be computed through the splitting of the two
restrictions to a complex line (``star_product_via_splitting``), which is
the definitional route; the two must agree wherever both are defined, and
the test suite holds them to that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import (
    CenterMismatchError,
    CompositionError,
    DivergenceError,
    InputError,
    OrthogonalityError,
)
from .quaternions import (
    Quaternion,
    UnitImaginary,
    as_quaternion,
    inner_cross,
    slice_decompose,
)

#: default number of retained terms for transcendental expansions
DEFAULT_TRUNCATION = 64

#: |<I, J>| above which a pair is rejected as non-orthogonal
ORTHOGONALITY_TOL = 1e-12

#: distance from the complex line above which a sample is rejected
SLICE_MEMBERSHIP_TOL = 1e-9

_ZERO = Quaternion(0.0)
_ONE = Quaternion(1.0)


class RegularSeries:
    """Polynomial or truncated power series with right quaternion coefficients."""

    __slots__ = ("coeffs", "center", "exact", "radius")

    def __init__(
        self,
        coeffs: Iterable,
        center: float = 0.0,
        exact: bool = True,
        radius: Optional[float] = None,
    ):
        items = [as_quaternion(c) for c in coeffs]
        if exact:
            while items and items[-1] == _ZERO:
                items.pop()
        self.coeffs: tuple[Quaternion, ...] = tuple(items)
        self.center = float(center)
        self.exact = bool(exact)
        self.radius = None if radius is None else float(radius)

    # -- constructors --------------------------------------------------------

    @classmethod
    def constant(cls, c, center: float = 0.0) -> "RegularSeries":
        return cls([as_quaternion(c)], center=center)

    @classmethod
    def identity(cls) -> "RegularSeries":
        """The polynomial q (centered at 0)."""
        return cls([0.0, 1.0])

    @classmethod
    def from_real_coeffs(
        cls, coeffs: Sequence[float], center: float = 0.0, exact: bool = True
    ) -> "RegularSeries":
        return cls([Quaternion(float(c)) for c in coeffs], center=center, exact=exact)

    @classmethod
    def exp_series(cls, order: int = DEFAULT_TRUNCATION, center: float = 0.0) -> "RegularSeries":
        """Truncated exponential series sum_{n<=order} q^n / n!."""
        coeffs = [1.0]
        for n in range(1, order + 1):
            coeffs.append(coeffs[-1] / n)
        return cls.from_real_coeffs(coeffs, center=center, exact=False)

    # -- structure -----------------------------------------------------------

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient; -1 for the zero polynomial."""
        for n in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[n] != _ZERO:
                return n
        return -1

    @property
    def truncation_order(self) -> Optional[int]:
        """Highest retained order for truncated series, None for exact ones."""
        return None if self.exact else len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return all(c == _ZERO for c in self.coeffs)

    @property
    def is_slice_preserving(self) -> bool:
        """True iff every coefficient is real (exactly)."""
        return all(c.is_real() for c in self.coeffs)

    def coefficient(self, n: int) -> Quaternion:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else _ZERO

    def real_coeffs(self) -> np.ndarray:
        """Real coefficient vector (ascending); requires a slice preserving series."""
        if not self.is_slice_preserving:
            raise InputError("series has non-real coefficients")
        return np.array([c.w for c in self.coeffs], dtype=float)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, RegularSeries):
            return NotImplemented
        return (
            self.coeffs == other.coeffs
            and self.center == other.center
            and self.exact == other.exact
        )

    def __hash__(self):
        return hash((self.coeffs, self.center, self.exact))

    def allclose(self, other: "RegularSeries", tol: float = 1e-12) -> bool:
        if self.center != other.center:
            return False
        n = max(len(self.coeffs), len(other.coeffs))
        scale = max(
            [1.0]
            + [abs(c) for c in self.coeffs]
            + [abs(c) for c in other.coeffs]
        )
        return all(
            abs(self.coefficient(k) - other.coefficient(k)) <= tol * scale
            for k in range(n)
        )

    def __repr__(self):
        kind = "poly" if self.exact else f"series[{len(self.coeffs) - 1}]"
        return f"RegularSeries<{kind}, center={self.center}, coeffs={list(self.coeffs)!r}>"

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, q) -> Quaternion:
        """Value sum_n (q - center)^n a_n; powers multiply coefficients on the left."""
        q = as_quaternion(q)
        base = q - self.center
        if not self.exact and self.radius is not None:
            if abs(base) > self.radius:
                raise DivergenceError(
                    f"|q - center| = {abs(base)!r} exceeds radius {self.radius!r}"
                )
        result = _ZERO
        for a in reversed(self.coeffs):
            result = base * result + a
        return result

    __call__ = evaluate

    def evaluate_complex(self, z: complex) -> complex:
        """Restriction to a complex line for slice preserving series."""
        if not self.is_slice_preserving:
            raise InputError("complex evaluation requires real coefficients")
        result = 0j
        for a in reversed(self.coeffs):
            result = (z - self.center) * result + a.w
        return result

    # -- ring operations -------------------------------------------------------

    def _check_center(self, other: "RegularSeries"):
        if self.center != other.center:
            raise CenterMismatchError(
                f"centers differ: {self.center!r} vs {other.center!r}"
            )

    def __add__(self, other):
        if isinstance(other, (int, float, Quaternion)):
            other = RegularSeries.constant(other, center=self.center)
        if not isinstance(other, RegularSeries):
            return NotImplemented
        self._check_center(other)
        exact = self.exact and other.exact
        n = _combined_length(self, other, exact)
        coeffs = [self.coefficient(k) + other.coefficient(k) for k in range(n)]
        return RegularSeries(coeffs, center=self.center, exact=exact)

    __radd__ = __add__

    def __neg__(self):
        return RegularSeries(
            [-c for c in self.coeffs], center=self.center, exact=self.exact,
            radius=self.radius,
        )

    def __sub__(self, other):
        if isinstance(other, (int, float, Quaternion)):
            other = RegularSeries.constant(other, center=self.center)
        if not isinstance(other, RegularSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def star(self, other: "RegularSeries") -> "RegularSeries":
        """Star product by coefficient convolution c_n = sum a_k b_{n-k}."""
        if isinstance(other, (int, float, Quaternion)):
            other = RegularSeries.constant(other, center=self.center)
        self._check_center(other)
        exact = self.exact and other.exact
        if exact:
            n = max(len(self.coeffs) + len(other.coeffs) - 1, 0)
        else:
            n = _combined_length(self, other, exact)
        coeffs = []
        for m in range(n):
            acc = _ZERO
            for k in range(m + 1):
                a = self.coefficient(k)
                b = other.coefficient(m - k)
                if a != _ZERO and b != _ZERO:
                    acc = acc + a * b
            coeffs.append(acc)
        return RegularSeries(coeffs, center=self.center, exact=exact)

    def __mul__(self, other):
        if isinstance(other, (int, float, Quaternion)):
            return self.star(RegularSeries.constant(other, center=self.center))
        if isinstance(other, RegularSeries):
            return self.star(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, Quaternion)):
            return RegularSeries.constant(other, center=self.center).star(self)
        return NotImplemented

    def star_power(self, n: int) -> "RegularSeries":
        if n < 0:
            raise InputError("negative star powers are not series")
        result = RegularSeries.constant(1.0, center=self.center)
        for _ in range(n):
            result = result.star(self)
        return result

    # -- conjugation and symmetrization ---------------------------------------

    def conj_coeffs(self) -> "RegularSeries":
        """Series with conjugated coefficients (the regular conjugate)."""
        return RegularSeries(
            [c.conjugate() for c in self.coeffs],
            center=self.center,
            exact=self.exact,
            radius=self.radius,
        )

    def symmetrization(self) -> "RegularSeries":
        """f star (conjugate of f): slice preserving with the same zero spheres.

        The convolution coefficients are real in exact arithmetic; the float
        imaginary residue (a few ulp) is dropped so the result is exactly
        slice preserving.
        """
        prod = self.star(self.conj_coeffs())
        return RegularSeries(
            [Quaternion(c.w) for c in prod.coeffs],
            center=self.center,
            exact=prod.exact,
        )

    # -- recentering -----------------------------------------------------------

    def recenter(self, new_center: float) -> "RegularSeries":
        """Rewrite in powers of (q - new_center) by a Taylor shift."""
        new_center = float(new_center)
        if new_center == self.center:
            return self
        # (q - c_old) = (q - c_new) + (c_new - c_old) is the substitution;
        # the Horner shift below evaluates it coefficient by coefficient
        shift = new_center - self.center
        coeffs = list(self.coeffs)
        n = len(coeffs)
        # synthetic Horner shift: repeated evaluation at `shift`
        for i in range(n):
            for k in range(n - 2, i - 1, -1):
                coeffs[k] = coeffs[k] + coeffs[k + 1] * shift
        return RegularSeries(coeffs, center=new_center, exact=self.exact, radius=self.radius)

    # -- JSON wire format --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "center": self.center,
            "coeffs": [c.to_json() for c in self.coeffs],
            "exact": self.exact,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RegularSeries":
        try:
            coeffs = [Quaternion.from_json(c) for c in data["coeffs"]]
            return cls(coeffs, center=float(data.get("center", 0.0)),
                       exact=bool(data.get("exact", True)))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed series JSON: {exc}") from exc


def _combined_length(a: RegularSeries, b: RegularSeries, exact: bool) -> int:
    """Retained length for sums/products: everything for polynomials, the
    shortest declared truncation otherwise."""
    if exact:
        return max(len(a.coeffs), len(b.coeffs))
    orders = []
    if not a.exact:
        orders.append(len(a.coeffs) - 1)
    if not b.exact:
        orders.append(len(b.coeffs) - 1)
    return min(orders) + 1


def star_product(f: RegularSeries, g: RegularSeries) -> RegularSeries:
    """Star product of two series with the same center."""
    return f.star(g)


@dataclass(frozen=True)
class ComplexSeries:
    """A power series with complex coefficients on one complex line."""

    coeffs: tuple[complex, ...]
    center: float = 0.0

    def evaluate(self, z: complex) -> complex:
        result = 0j
        for a in reversed(self.coeffs):
            result = (z - self.center) * result + a
        return result

    __call__ = evaluate


def _require_orthogonal(I: UnitImaginary, J: UnitImaginary) -> Quaternion:
    inner, cross = inner_cross(I, J)
    if abs(inner) > ORTHOGONALITY_TOL:
        raise OrthogonalityError(f"units are not orthogonal: <I, J> = {inner!r}")
    return cross


def slice_coordinate(q: Quaternion, I: UnitImaginary) -> complex:
    """Coordinate of a point of C_I as a complex number x + t*1j.

    Raises when q does not lie on the line C_I (within SLICE_MEMBERSHIP_TOL).
    """
    q = as_quaternion(q)
    t = q.imag().dot(I)
    residual = abs(q - (Quaternion(q.w) + I * t))
    if residual > SLICE_MEMBERSHIP_TOL * max(1.0, abs(q)):
        raise InputError(f"point {q!r} is not on the given complex line")
    return complex(q.w, t)


def embed_complex(z: complex, I: UnitImaginary) -> Quaternion:
    """The point of C_I with coordinate z."""
    return Quaternion(z.real) + I * z.imag


def split(
    f: RegularSeries, I: UnitImaginary, J: UnitImaginary
) -> tuple[ComplexSeries, ComplexSeries]:
    """Split f on C_I as F + G*J with F, G holomorphic on C_I.

    Each coefficient decomposes in the orthonormal basis (1, I, J, I*J);
    the (1, I) part goes to F and the (J, I*J) part to G, so that
    F(z) + G(z)*J reproduces f on C_I.
    """
    K = _require_orthogonal(I, J)
    one = _ONE
    fc, gc = [], []
    for a in f.coeffs:
        fc.append(complex(a.dot(one), a.dot(I)))
        gc.append(complex(a.dot(J), a.dot(K)))
    if f.exact:
        while fc and fc[-1] == 0:
            fc.pop()
        while gc and gc[-1] == 0:
            gc.pop()
    return (ComplexSeries(tuple(fc), f.center), ComplexSeries(tuple(gc), f.center))


def star_product_via_splitting(
    f: RegularSeries,
    g: RegularSeries,
    I: UnitImaginary,
    J: UnitImaginary,
    samples: Sequence[Quaternion],
) -> list[Quaternion]:
    """Evaluate f star g at points of C_I through the splitting formula.

    With f = F + G*J and g = H + K*J on C_I, the product restricted to C_I is

        (F(z)H(z) - G(z) conj(K(conj z))) + (F(z)K(z) + G(z) conj(H(conj z))) * J

    which pins down the coefficient convolution used by ``star_product``.
    """
    f._check_center(g)
    F, G = split(f, I, J)
    H, K = split(g, I, J)
    out = []
    for q in samples:
        z = slice_coordinate(q, I)
        zb = z.conjugate()
        first = F(z) * H(z) - G(z) * K(zb).conjugate()
        second = F(z) * K(z) + G(z) * H(zb).conjugate()
        out.append(embed_complex(first, I) + embed_complex(second, I) * J)
    return out


def representation_combine(
    value_plus: Quaternion,
    value_minus: Quaternion,
    I: UnitImaginary,
    J: UnitImaginary,
) -> Quaternion:
    """Combine the two slice samples f(x + yI), f(x - yI) into f(x + yJ).

    This is the data-driven core of the extension formula:
    (v+ + v-)/2 + (J*I/2)(v- - v+).
    """
    half_sum = (value_plus + value_minus) * 0.5
    return half_sum + (J * I) * 0.5 * (value_minus - value_plus)


def extend_from_slice(
    sampler: Callable[[Quaternion], Quaternion],
    I: UnitImaginary,
    q: Quaternion,
) -> Quaternion:
    """Value at q of the regular extension of a function known on C_I.

    ``sampler`` is queried at the two points x + yI and x - yI where
    q = x + J*y; a real q degenerates both samples to the single point x.
    """
    x, y, J = slice_decompose(q)
    if J is None:
        return as_quaternion(sampler(Quaternion(x)))
    v_plus = as_quaternion(sampler(Quaternion(x) + I * y))
    v_minus = as_quaternion(sampler(Quaternion(x) - I * y))
    return representation_combine(v_plus, v_minus, I, J)


def compose_slice_preserving(
    g: RegularSeries, f: RegularSeries, max_order: Optional[int] = None
) -> RegularSeries:
    """Coefficient-level composition g(f(q)) for slice preserving f.

    The inner function must have real coefficients so that its powers are
    again series with real coefficients; the outer coefficients then attach
    on the right.  The result is expanded fully (or up to ``max_order``)
    and is exact only when both inputs are exact polynomials.
    """
    if not f.is_slice_preserving:
        raise CompositionError("inner function must be slice preserving")
    exact = g.exact and f.exact
    # inner series relative to the outer center: powers of (f - center_g)
    base = f.real_coeffs().tolist()
    if not base:
        base = [0.0]
    base[0] -= g.center

    result: list[Quaternion] = [_ZERO]
    power = [1.0]  # real coefficients of (f - center_g)^n, ascending
    for n, b in enumerate(g.coeffs):
        if n > 0:
            power = np.convolve(power, base).tolist()
            if max_order is not None and len(power) > max_order + 1:
                power = power[: max_order + 1]
        if b == _ZERO:
            continue
        if len(result) < len(power):
            result.extend([_ZERO] * (len(power) - len(result)))
        for m, r in enumerate(power):
            if r != 0.0:
                result[m] = result[m] + b * r
    if max_order is not None:
        result = result[: max_order + 1]
        exact = False
    return RegularSeries(result, center=f.center, exact=exact)
