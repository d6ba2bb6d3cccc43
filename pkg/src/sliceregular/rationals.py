"""The quotient field of slice preserving polynomials.

A member is a normalized ratio num/den of real coefficient polynomials:
the two share no zero sphere, and the denominator is monic with its
leading coefficient folded into the numerator.  All field arithmetic
renormalizes, so poles and zeros stay readable off the divisors, and the
ratio restricts to each complex line as an ordinary complex rational
function, which is what the Laurent machinery works on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P

from .divisors import Sphere, real_poly_spheres, sord_coeffs
from .errors import InputError, PoleEvaluationError, ZeroFunctionError
from .quaternions import (
    Quaternion,
    UNIT_I,
    UnitImaginary,
    as_quaternion,
    slice_decompose,
)
from .series import RegularSeries, embed_complex

#: |cross product| below this (relative) treats two imaginary parts as
#: parallel, i.e. the points share a complex line
SAME_LINE_TOL = 1e-12


def _as_poly(f) -> RegularSeries:
    if isinstance(f, (int, float)):
        f = RegularSeries.constant(float(f))
    if not isinstance(f, RegularSeries):
        raise InputError(f"expected a polynomial, got {type(f).__name__}")
    if not f.exact:
        raise InputError("rational arithmetic needs exact polynomials")
    if not f.is_slice_preserving:
        raise InputError("rational arithmetic needs real coefficients")
    if f.center != 0.0:
        f = f.recenter(0.0)
    return f


def _deflate_at(coeffs: np.ndarray, sphere: Sphere, times: int) -> np.ndarray:
    factor = sphere.factor_coeffs()
    for _ in range(times):
        coeffs, _ = P.polydiv(coeffs, factor)
    return coeffs


class SemiregularRational:
    """Normalized quotient of two slice preserving polynomials."""

    __slots__ = ("num", "den", "is_normalized")

    def __init__(self, num, den=None, normalize: bool = True):
        num = _as_poly(num)
        den = _as_poly(den if den is not None else 1.0)
        if den.is_zero:
            raise ZeroDivisionError("denominator is identically zero")
        if normalize:
            num, den = _cancel_common(num, den)
        self.num = num
        self.den = den
        self.is_normalized = bool(normalize)

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_polynomial(cls, f: RegularSeries) -> "SemiregularRational":
        return cls(f)

    @classmethod
    def constant(cls, value: float) -> "SemiregularRational":
        return cls(RegularSeries.constant(float(value)))

    @classmethod
    def identity(cls) -> "SemiregularRational":
        return cls(RegularSeries.identity())

    @classmethod
    def from_real_coeffs(cls, num, den=(1.0,)) -> "SemiregularRational":
        return cls(
            RegularSeries.from_real_coeffs(num),
            RegularSeries.from_real_coeffs(den),
        )

    # -- structure -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __repr__(self):
        return f"SemiregularRational(num={list(self.num.coeffs)!r}, den={list(self.den.coeffs)!r})"

    def __eq__(self, other):
        if not isinstance(other, SemiregularRational):
            return NotImplemented
        return (self - other).is_zero

    def __hash__(self):
        return hash((self.num.coeffs, self.den.coeffs))

    def allclose(self, other: "SemiregularRational", tol: float = 1e-9) -> bool:
        """Coefficientwise agreement of the normalized representations.

        A normalized form (monic denominator, no shared spheres) is unique,
        so the two quotients agree as functions iff numerators and
        denominators agree coefficientwise.  Comparing representations
        avoids forming the difference, whose numerator would be a
        numerically-but-not-exactly-zero polynomial."""
        return self.num.allclose(other.num, tol) and self.den.allclose(other.den, tol)

    # -- evaluation ------------------------------------------------------------

    def evaluate(self, q) -> Quaternion:
        q = as_quaternion(q)
        d = self.den.evaluate(q)
        if abs(d) == 0.0:
            raise PoleEvaluationError(f"evaluation on a pole sphere at {q!r}")
        return self.num.evaluate(q) * d.inverse()

    __call__ = evaluate

    def evaluate_complex(self, z: complex) -> complex:
        d = self.den.evaluate_complex(z)
        if d == 0:
            raise PoleEvaluationError(f"evaluation on a pole at {z!r}")
        return self.num.evaluate_complex(z) / d

    # -- field operations --------------------------------------------------------

    def __add__(self, other):
        other = _coerce_rational(other)
        if other is NotImplemented:
            return NotImplemented
        num = self.num.star(other.den) + other.num.star(self.den)
        return SemiregularRational(num, self.den.star(other.den))

    __radd__ = __add__

    def __neg__(self):
        # negation preserves normalization, no need to re-cancel
        out = SemiregularRational(-self.num, self.den, normalize=False)
        out.is_normalized = self.is_normalized
        return out

    def __sub__(self, other):
        other = _coerce_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return SemiregularRational(
            self.num.star(other.num), self.den.star(other.den)
        )

    __rmul__ = __mul__

    def inverse(self) -> "SemiregularRational":
        if self.is_zero:
            raise ZeroDivisionError("inverse of the zero function")
        return SemiregularRational(self.den, self.num)

    def __truediv__(self, other):
        other = _coerce_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    # -- JSON wire format ----------------------------------------------------------

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "SemiregularRational":
        try:
            return cls(
                RegularSeries.from_json(data["num"]),
                RegularSeries.from_json(data["den"]),
            )
        except KeyError as exc:
            raise InputError(f"malformed rational JSON: {exc}") from exc


def _coerce_rational(value):
    if isinstance(value, SemiregularRational):
        return value
    if isinstance(value, RegularSeries):
        return SemiregularRational(value)
    if isinstance(value, (int, float)):
        return SemiregularRational.constant(float(value))
    return NotImplemented


def _cancel_common(num: RegularSeries, den: RegularSeries):
    """Remove shared zero spheres and make the denominator monic.

    Only the denominator is factored in full; the numerator (which may be
    an arbitrary sum with no nice root structure) is probed at the
    denominator's spheres by deflation, which is all cancellation needs.
    """
    if num.is_zero:
        return RegularSeries.constant(0.0), RegularSeries.constant(1.0)
    nc = num.real_coeffs()
    dc = den.real_coeffs()
    if len(dc) > 1:
        for sphere, dm in real_poly_spheres(dc):
            nm = sord_coeffs(nc, sphere)
            k = min(dm, nm)
            if k > 0:
                nc = _deflate_at(nc, sphere, k)
                dc = _deflate_at(dc, sphere, k)
    lc = dc[-1]
    nc = nc / lc
    dc = dc / lc
    dc[-1] = 1.0
    return (
        RegularSeries.from_real_coeffs(nc),
        RegularSeries.from_real_coeffs(dc),
    )


def normalize(num: RegularSeries, den: RegularSeries) -> SemiregularRational:
    """Quotient with common spherical and linear factors cancelled."""
    return SemiregularRational(num, den)


@dataclass(frozen=True)
class Singularity:
    """Classification of a point: regular, removable, or a pole with order."""

    kind: str  # "regular" | "removable" | "pole"
    order: Optional[int] = None


def classify_singularity(f: SemiregularRational, p) -> Singularity:
    """Behaviour of f on the sphere through p.

    After normalization a vanishing denominator always means a pole whose
    order is constant on the whole sphere; removable singularities can
    only be reported for rationals built with ``normalize=False``.
    """
    p = as_quaternion(p)
    sphere = Sphere(p.w, p.imag_norm())
    k_den = sord_coeffs(f.den.real_coeffs(), sphere)
    if k_den == 0:
        return Singularity("regular")
    s = sord_coeffs(f.num.real_coeffs(), sphere) - k_den
    if s < 0:
        return Singularity("pole", -s)
    return Singularity("removable")


def sigma_tau(p, q) -> tuple[float, float]:
    """The two slice-aware distances between quaternions.

    On a shared complex line both reduce to the Euclidean distance; across
    lines, sigma adds the imaginary moduli and tau subtracts them, so tau
    vanishes exactly on the sphere through p.
    """
    p = as_quaternion(p)
    q = as_quaternion(q)
    ip, iq = p.imag(), q.imag()
    np_, nq = ip.imag_norm(), iq.imag_norm()
    same_line = (
        np_ == 0.0
        or nq == 0.0
        or abs(
            Quaternion(
                0.0,
                ip.y * iq.z - ip.z * iq.y,
                ip.z * iq.x - ip.x * iq.z,
                ip.x * iq.y - ip.y * iq.x,
            )
        )
        <= SAME_LINE_TOL * np_ * nq
    )
    if same_line:
        d = abs(p - q)
        return (d, d)
    dx = p.w - q.w
    sigma = math.hypot(dx, np_ + nq)
    tau = math.hypot(dx, np_ - nq)
    return (sigma, tau)


def in_sigma_region(q, p, d1: float, d2: float) -> bool:
    """Membership in the annular region tau(q,p) > d1 and sigma(q,p) < d2."""
    if not (0.0 <= d1 < d2):
        raise InputError(f"need 0 <= d1 < d2, got d1={d1!r}, d2={d2!r}")
    sigma, tau = sigma_tau(p, q)
    return tau > d1 and sigma < d2


def _taylor_shift_complex(coeffs: np.ndarray, z0: complex) -> np.ndarray:
    """Coefficients of p(z0 + w) in powers of w (Horner shift)."""
    out = np.array(coeffs, dtype=complex)
    n = len(out)
    for i in range(n):
        for k in range(n - 2, i - 1, -1):
            out[k] = out[k] + out[k + 1] * z0
    return out


def _series_reciprocal(d: np.ndarray, length: int) -> np.ndarray:
    """First `length` coefficients of 1 / (d0 + d1 w + ...), d0 != 0."""
    out = np.zeros(length, dtype=complex)
    out[0] = 1.0 / d[0]
    for n in range(1, length):
        acc = 0j
        top = min(n, len(d) - 1)
        for k in range(1, top + 1):
            acc += d[k] * out[n - k]
        out[n] = -acc / d[0]
    return out


def laurent_coefficients(
    f: SemiregularRational, p, n_min: int, n_max: int
) -> list[Quaternion]:
    """Laurent coefficients of f at p for orders n_min..n_max.

    Computed classically on the complex line through p: shift numerator
    and denominator to p, strip the denominator's known vanishing order,
    and divide the power series.  On that line the star powers of (q - p)
    restrict to ordinary powers, so these are the coefficients of the
    slice-regular expansion; agreement off the line is a consequence of
    the extension formula and is property-tested rather than assumed.
    """
    if n_min > n_max:
        raise InputError(f"empty order range [{n_min}, {n_max}]")
    p = as_quaternion(p)
    x, y, unit = slice_decompose(p)
    sphere = Sphere(x, y)
    nc = f.num.real_coeffs()
    dc = f.den.real_coeffs()
    k = sord_coeffs(dc, sphere)

    z0 = complex(x, y)
    num_shift = _taylor_shift_complex(nc, z0)
    den_shift = _taylor_shift_complex(dc, z0)
    # the first k shifted coefficients of the denominator vanish by
    # construction; drop them (they are rounding noise)
    den_tail = den_shift[k:]
    if len(den_tail) == 0 or den_tail[0] == 0:
        raise ZeroFunctionError("denominator vanishes beyond its spherical order")

    length = max(n_max + k + 1, 1)
    inv = _series_reciprocal(den_tail, length)
    regular = np.zeros(length, dtype=complex)
    top = min(length, len(num_shift))
    full = np.convolve(num_shift[:top], inv)[:length]
    regular[: len(full)] = full

    out: list[Quaternion] = []
    I = unit if unit is not None else UNIT_I
    for n in range(n_min, n_max + 1):
        j = n + k
        if j < 0 or j >= length:
            out.append(Quaternion(0.0))
        else:
            out.append(embed_complex(complex(regular[j]), I))
    return out
