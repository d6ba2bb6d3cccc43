"""Quaternion arithmetic and the slice decomposition q = x + I*y.

A quaternion is stored as four real components ``(w, x, y, z)`` relative to
the basis ``1, i, j, k`` with the Hamilton relations ``i*i = j*j = k*k = -1``
and ``i*j = -j*i = k``.  Every non-real quaternion lies on exactly one
complex line ``C_I = R + I*R`` spanned by ``1`` and a unit imaginary ``I``;
the decomposition ``q = x + I*y`` with ``y = |Im(q)| >= 0`` is the basic
coordinate system used throughout the package.

Values are immutable after construction and all operations are pure, so
everything here is safe for unrestricted concurrent use.
"""

from __future__ import annotations

import math
from typing import Optional

from .errors import InputError

#: slack accepted on |I| - 1 before UnitImaginary construction is rejected
UNIT_NORM_SLACK = 1e-6


class Quaternion:
    """An element of the real quaternions, with components (w, x, y, z)."""

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w: float = 0.0, x: float = 0.0, y: float = 0.0, z: float = 0.0):
        self.w = float(w)
        self.x = float(x)
        self.y = float(y)
        self.z = float(z)

    # -- basic structure ---------------------------------------------------

    @property
    def real(self) -> float:
        return self.w

    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.x, self.y, self.z)

    def imag_norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def is_real(self) -> bool:
        """True when the imaginary part is exactly zero."""
        return self.x == 0.0 and self.y == 0.0 and self.z == 0.0

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm_sq(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return math.sqrt(self.norm_sq())

    def inverse(self) -> "Quaternion":
        n2 = self.norm_sq()
        if n2 == 0.0:
            raise ZeroDivisionError("inverse of the zero quaternion")
        return Quaternion(self.w / n2, -self.x / n2, -self.y / n2, -self.z / n2)

    def dot(self, other: "Quaternion") -> float:
        """Euclidean inner product of the two 4-vectors."""
        return (
            self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
        )

    def components(self) -> tuple[float, float, float, float]:
        return (self.w, self.x, self.y, self.z)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Quaternion(
            self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Quaternion(
            self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z
        )

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(
                self.w * other, self.x * other, self.y * other, self.z * other
            )
        if not isinstance(other, Quaternion):
            return NotImplemented
        a, b = self, other
        return Quaternion(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(
                self.w * other, self.x * other, self.y * other, self.z * other
            )
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(
                self.w / other, self.x / other, self.y / other, self.z / other
            )
        if isinstance(other, Quaternion):
            return self * other.inverse()
        return NotImplemented

    def __pow__(self, n: int) -> "Quaternion":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = Quaternion(1.0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison / hashing / display -------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (
            self.w == other.w
            and self.x == other.x
            and self.y == other.y
            and self.z == other.z
        )

    def __hash__(self):
        return hash((self.w, self.x, self.y, self.z))

    def __repr__(self):
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"

    def isclose(self, other: "Quaternion", tol: float = 1e-12) -> bool:
        return abs(self - other) <= tol * max(1.0, abs(self), abs(other))

    # -- JSON wire format ----------------------------------------------------

    def to_json(self) -> list[float]:
        """Encode as the four-number array [w, x, y, z]."""
        return [self.w, self.x, self.y, self.z]

    @classmethod
    def from_json(cls, data) -> "Quaternion":
        if len(data) != 4:
            raise InputError("quaternion JSON must be a 4-element array")
        vals = [float(v) for v in data]
        if not all(math.isfinite(v) for v in vals):
            raise InputError("quaternion components must be finite")
        return cls(*vals)


class UnitImaginary(Quaternion):
    """A point of the imaginary unit sphere: I*I = -1.

    Inputs whose norm differs from 1 by more than ``UNIT_NORM_SLACK`` are
    rejected; anything closer is renormalized so the stored components
    satisfy x*x + y*y + z*z = 1 to machine precision.
    """

    __slots__ = ()

    def __init__(self, x: float, y: float, z: float):
        n = math.sqrt(x * x + y * y + z * z)
        if not math.isfinite(n) or abs(n - 1.0) > UNIT_NORM_SLACK:
            raise InputError(f"not a unit imaginary: |(x,y,z)| = {n!r}")
        super().__init__(0.0, x / n, y / n, z / n)

    @classmethod
    def from_imag(cls, q: Quaternion) -> "UnitImaginary":
        """Direction of the imaginary part of q (q must not be real)."""
        n = q.imag_norm()
        if n == 0.0:
            raise InputError("a real quaternion has no imaginary direction")
        return cls(q.x / n, q.y / n, q.z / n)

    def to_json(self) -> list[float]:
        return [self.x, self.y, self.z]

    @classmethod
    def from_json(cls, data) -> "UnitImaginary":
        if len(data) != 3:
            raise InputError("unit imaginary JSON must be a 3-element array")
        return cls(float(data[0]), float(data[1]), float(data[2]))

    def __repr__(self):
        return f"UnitImaginary({self.x!r}, {self.y!r}, {self.z!r})"


UNIT_I = UnitImaginary(1.0, 0.0, 0.0)
UNIT_J = UnitImaginary(0.0, 1.0, 0.0)
UNIT_K = UnitImaginary(0.0, 0.0, 1.0)


def _coerce(value):
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float)):
        return Quaternion(float(value))
    return NotImplemented


def as_quaternion(value) -> Quaternion:
    """Coerce a real number or quaternion to a Quaternion."""
    q = _coerce(value)
    if q is NotImplemented:
        raise InputError(f"cannot interpret {value!r} as a quaternion")
    return q


def mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product (noncommutative in general)."""
    return as_quaternion(a) * as_quaternion(b)


def slice_decompose(q: Quaternion) -> tuple[float, float, Optional[UnitImaginary]]:
    """Write q = x + I*y with x = Re(q), y = |Im(q)| >= 0.

    Real quaternions return ``(x, 0.0, None)``: the unit is not unique
    there, so callers that need one must supply it themselves.
    """
    q = as_quaternion(q)
    y = q.imag_norm()
    if y == 0.0:
        return (q.w, 0.0, None)
    return (q.w, y, UnitImaginary(q.x / y, q.y / y, q.z / y))


def slice_transfer(q: Quaternion, J: UnitImaginary) -> Quaternion:
    """Move q = x + I*y to the same coordinates on the J-line: x + J*y."""
    x, y, _ = slice_decompose(q)
    if y == 0.0:
        return Quaternion(x)
    return Quaternion(x) + J * y


def inner_cross(I: UnitImaginary, J: UnitImaginary) -> tuple[float, Quaternion]:
    """Inner product and cross product of two imaginary units.

    The Hamilton product decomposes as ``I*J = -inner + cross`` exactly;
    when inner == 0 the cross product is itself a unit imaginary and
    (1, I, J, I*J) is an orthonormal basis behaving like (1, i, j, k).
    """
    inner = I.x * J.x + I.y * J.y + I.z * J.z
    cross = Quaternion(
        0.0,
        I.y * J.z - I.z * J.y,
        I.z * J.x - I.x * J.z,
        I.x * J.y - I.y * J.x,
    )
    return (inner, cross)


def unit_power(I: UnitImaginary, a: int) -> Quaternion:
    """Integer power of a unit imaginary: cycles through 1, I, -1, -I."""
    r = a % 4
    if r == 0:
        return Quaternion(1.0)
    if r == 1:
        return Quaternion(0.0, I.x, I.y, I.z)
    if r == 2:
        return Quaternion(-1.0)
    return Quaternion(0.0, -I.x, -I.y, -I.z)


def exp_quaternion(q: Quaternion) -> Quaternion:
    """Quaternionic exponential: exp(x + I*y) = e^x (cos y + I sin y)."""
    q = as_quaternion(q)
    ex = math.exp(q.w)
    y = q.imag_norm()
    if y == 0.0:
        return Quaternion(ex)
    s = ex * math.sin(y) / y
    return Quaternion(ex * math.cos(y), s * q.x, s * q.y, s * q.z)
