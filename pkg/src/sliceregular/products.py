"""Entire slice preserving functions as structured factor products.

Every factor has real defining data, so every evaluator here maps each
complex line into itself and the factors commute; products can therefore
be truncated, rooted and rearranged freely.  The factory functions build
the standard shapes: convergence factors, products realizing a prescribed
positive divisor, roots of exp(P), and the geometric-exponent family used
to separate valuations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .divisors import Sphere, SphericalDivisor, real_poly_spheres
from .errors import (
    BudgetExceededError,
    InputError,
    NegativeMultiplicityError,
    ZeroFunctionError,
)
from .quaternions import Quaternion, as_quaternion, exp_quaternion
from .series import RegularSeries

#: largest degree an evaluator is willing to expand into one polynomial
MAX_EXPANDED_DEGREE = 512

#: cap on the total exponent weight of the geometric-exponent family
EXPONENT_BUDGET = 10_000

_KINDS = ("power", "linear", "spherical", "convfactor", "exppoly")


def _conv_poly(n: int, a: float) -> tuple[float, ...]:
    """Real coefficients of q/a + q^2/(2 a^2) + ... + q^n/(n a^n)."""
    return tuple([0.0] + [a ** (-k) / k for k in range(1, n + 1)])


@dataclass(frozen=True)
class Factor:
    """One commuting building block of an entire evaluator."""

    kind: str
    exponent: int = 1
    b: Optional[float] = None          # linear: 1 - q/b
    x: Optional[float] = None          # spherical: center
    y: Optional[float] = None          # spherical: radius
    n: Optional[int] = None            # convfactor: truncation order
    a: Optional[float] = None          # convfactor: associated zero
    coeffs: Optional[tuple[float, ...]] = None  # exppoly: exp(sum c_k q^k)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InputError(f"unknown factor kind {self.kind!r}")
        if self.kind == "linear" and not self.b:
            raise InputError("linear factor needs a nonzero root b")
        if self.kind == "spherical":
            if self.x is None or self.y is None or self.y <= 0:
                raise InputError("spherical factor needs x and y > 0")
        if self.kind == "convfactor":
            if self.n is None or self.n < 0 or not self.a:
                raise InputError("convergence factor needs n >= 0 and a != 0")
        if self.kind == "exppoly" and self.coeffs is None:
            raise InputError("exponential factor needs real coefficients")

    def base_value(self, q: Quaternion) -> Quaternion:
        if self.kind == "power":
            return q
        if self.kind == "linear":
            return Quaternion(1.0) - q * (1.0 / self.b)
        if self.kind == "spherical":
            n2 = self.x * self.x + self.y * self.y
            return q * q * (1.0 / n2) - q * (2.0 * self.x / n2) + 1.0
        if self.kind == "convfactor":
            return exp_quaternion(_polyval_q(_conv_poly(self.n, self.a), q))
        return exp_quaternion(_polyval_q(self.coeffs, q))

    def value(self, q: Quaternion) -> Quaternion:
        return self.base_value(q) ** self.exponent

    def zero_polynomial(self) -> Optional[np.ndarray]:
        """Real coefficients of the vanishing part (without the exponent);
        None for nowhere-zero factors."""
        if self.kind == "power":
            return np.array([0.0, 1.0])
        if self.kind == "linear":
            return np.array([1.0, -1.0 / self.b])
        if self.kind == "spherical":
            n2 = self.x * self.x + self.y * self.y
            return np.array([1.0, -2.0 * self.x / n2, 1.0 / n2])
        return None

    def zero_sphere(self) -> Optional[tuple[Sphere, int]]:
        if self.kind == "power":
            return (Sphere(0.0, 0.0), self.exponent)
        if self.kind == "linear":
            return (Sphere(self.b, 0.0), self.exponent)
        if self.kind == "spherical":
            return (Sphere(self.x, self.y), self.exponent)
        return None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "exponent": self.exponent}
        for name in ("b", "x", "y", "n", "a"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        if self.coeffs is not None:
            out["coeffs"] = list(self.coeffs)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Factor":
        try:
            coeffs = data.get("coeffs")
            return cls(
                kind=data["kind"],
                exponent=int(data.get("exponent", 1)),
                b=data.get("b"),
                x=data.get("x"),
                y=data.get("y"),
                n=data.get("n"),
                a=data.get("a"),
                coeffs=tuple(float(c) for c in coeffs) if coeffs is not None else None,
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed factor JSON: {exc}") from exc


def _polyval_q(coeffs: Sequence[float], q: Quaternion) -> Quaternion:
    result = Quaternion(0.0)
    for c in reversed(coeffs):
        result = q * result + float(c)
    return result


class EntireEvaluator:
    """A finite product of commuting slice preserving factors."""

    __slots__ = ("factors",)

    def __init__(self, factors: Iterable[Factor] = ()):
        self.factors = tuple(factors)

    def evaluate(self, q) -> Quaternion:
        q = as_quaternion(q)
        result = Quaternion(1.0)
        for f in self.factors:
            result = result * f.value(q)
        return result

    __call__ = evaluate

    def zero_divisor(self) -> SphericalDivisor:
        """Divisor read directly off the factor data (no root finding)."""
        return SphericalDivisor(
            s for s in (f.zero_sphere() for f in self.factors) if s is not None
        )

    def polynomial_part(self, max_degree: int = MAX_EXPANDED_DEGREE) -> RegularSeries:
        """The vanishing factors expanded into one real polynomial.

        Exponential factors are nowhere zero and are skipped; the result
        has exactly the evaluator's zeros.  Refuses degrees beyond
        ``max_degree``: large products should be evaluated factorwise.
        """
        total = 0
        parts = []
        for f in self.factors:
            zp = f.zero_polynomial()
            if zp is None:
                continue
            if f.exponent < 0:
                raise InputError("negative exponents have poles, not a polynomial part")
            total += (len(zp) - 1) * f.exponent
            if total > max_degree:
                raise InputError(f"polynomial part degree exceeds {max_degree}")
            parts.append((zp, f.exponent))
        coeffs = np.array([1.0])
        for zp, e in parts:
            for _ in range(e):
                coeffs = P.polymul(coeffs, zp)
        return RegularSeries.from_real_coeffs(coeffs)

    def __mul__(self, other):
        if not isinstance(other, EntireEvaluator):
            return NotImplemented
        return EntireEvaluator(self.factors + other.factors)

    def __len__(self):
        return len(self.factors)

    def __repr__(self):
        return f"EntireEvaluator({len(self.factors)} factors)"

    def to_json(self) -> dict:
        return {"factors": [f.to_json() for f in self.factors]}

    @classmethod
    def from_json(cls, data: dict) -> "EntireEvaluator":
        try:
            return cls(Factor.from_json(f) for f in data["factors"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed evaluator JSON: {exc}") from exc


def convergence_factor(n: int, a: float, q) -> Quaternion:
    """Value of the convergence-producing factor exp(sum_{k<=n} q^k/(k a^k));
    equal to 1 when n = 0, and never zero."""
    if a == 0:
        raise InputError("convergence factor needs a != 0")
    if n < 0:
        raise InputError("convergence factor needs n >= 0")
    if n == 0:
        return Quaternion(1.0)
    return Factor("convfactor", n=n, a=float(a)).value(as_quaternion(q))


def construct_from_divisor(
    d: SphericalDivisor, genus: int = 0
) -> EntireEvaluator:
    """Entire evaluator vanishing exactly on a prescribed positive divisor.

    Each real zero b != 0 contributes (1 - q/b) with its convergence
    factor, each sphere contributes the normalized real quadratic with the
    matching exponential factor, and a zero at the origin contributes a
    plain power of q.  All factors take the value 1 at 0 (except the
    origin power) and are raised to the prescribed multiplicity.
    """
    if genus < 0:
        raise InputError("genus must be nonnegative")
    if not d.is_positive:
        raise NegativeMultiplicityError(f"divisor has a negative multiplicity: {d!r}")
    factors: list[Factor] = []
    for sphere, mult in d:
        if sphere.is_real and sphere.x == 0.0:
            factors.append(Factor("power", exponent=mult))
        elif sphere.is_real:
            factors.append(Factor("linear", exponent=mult, b=sphere.x))
            if genus >= 1:
                factors.append(Factor("convfactor", exponent=mult, n=genus, a=sphere.x))
        else:
            factors.append(Factor("spherical", exponent=mult, x=sphere.x, y=sphere.y))
            if genus >= 1:
                c = complex(sphere.x, sphere.y)
                n2 = abs(c) ** 2
                coeffs = [0.0] + [
                    2.0 * (c**k).real / (k * n2**k) for k in range(1, genus + 1)
                ]
                factors.append(Factor("exppoly", exponent=mult, coeffs=tuple(coeffs)))
    return EntireEvaluator(factors)


@dataclass(frozen=True)
class PolynomialFactorization:
    """A real polynomial split as h * q^m * prod(q - b) * prod((q-x)^2 + y^2)."""

    m: int
    real_factors: tuple[tuple[float, int], ...]
    spherical_factors: tuple[tuple[float, float, int], ...]
    h: float

    def reconstruct(self) -> RegularSeries:
        coeffs = np.array([self.h])
        for _ in range(self.m):
            coeffs = P.polymul(coeffs, [0.0, 1.0])
        for b, mult in self.real_factors:
            for _ in range(mult):
                coeffs = P.polymul(coeffs, [-b, 1.0])
        for x, y, mult in self.spherical_factors:
            for _ in range(mult):
                coeffs = P.polymul(coeffs, [x * x + y * y, -2.0 * x, 1.0])
        return RegularSeries.from_real_coeffs(coeffs)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "real_factors": [{"b": b, "mult": mult} for b, mult in self.real_factors],
            "spherical_factors": [
                {"x": x, "y": y, "mult": mult} for x, y, mult in self.spherical_factors
            ],
            "h": self.h,
        }


def factorize_polynomial(f: RegularSeries) -> PolynomialFactorization:
    """Split a slice preserving polynomial into monic zero factors times a
    real constant (the leading coefficient)."""
    if not isinstance(f, RegularSeries) or not f.exact:
        raise InputError("factorization needs an exact polynomial")
    if not f.is_slice_preserving:
        raise InputError("factorization needs real coefficients")
    if f.center != 0.0:
        f = f.recenter(0.0)
    coeffs = f.real_coeffs()
    if len(coeffs) == 0:
        raise ZeroFunctionError("cannot factor the zero polynomial")
    h = float(coeffs[-1])
    m = 0
    real_factors: list[tuple[float, int]] = []
    spherical: list[tuple[float, float, int]] = []
    for sphere, mult in real_poly_spheres(coeffs):
        if sphere.is_real and abs(sphere.x) <= 1e-12:
            m = mult
        elif sphere.is_real:
            real_factors.append((float(sphere.x), mult))
        else:
            spherical.append((float(sphere.x), float(sphere.y), mult))
    return PolynomialFactorization(
        m=m,
        real_factors=tuple(real_factors),
        spherical_factors=tuple(spherical),
        h=h,
    )


def exp_poly_root(coeffs: Sequence[float], ell: int) -> EntireEvaluator:
    """The ell-th root exp(P/ell) of exp(P) for a real polynomial P."""
    if ell < 1:
        raise InputError("root index must be a positive integer")
    scaled = tuple(float(c) / ell for c in coeffs)
    return EntireEvaluator([Factor("exppoly", coeffs=scaled)])


@dataclass(frozen=True)
class GeometricExponentFamily:
    """Truncations of the product with zeros of order d^n at q = n, and the
    companions used to take its d^ell-th root."""

    d: int
    ell: int
    n_factors: int
    full_product: EntireEvaluator      # zeros of order d^n at n = 1..n_factors
    tail_product: EntireEvaluator      # the factors from n = ell on
    head_balanced: EntireEvaluator     # tail times the head convergence factors
    root: EntireEvaluator              # d^ell-th root of the tail product
    head_roots: tuple[EntireEvaluator, ...]  # d^ell-th roots of head factors

    def root_side(self, q) -> Quaternion:
        """(root * prod head_roots^{d^h})^{d^ell}, the factored form whose
        power must reproduce head_balanced."""
        value = self.root.evaluate(q)
        for h, g in enumerate(self.head_roots, start=1):
            value = value * g.evaluate(q) ** (self.d**h)
        return value ** (self.d**self.ell)


def isssa_family(
    d: int, ell: int, n_factors: int, budget: int = EXPONENT_BUDGET
) -> GeometricExponentFamily:
    """Build the truncated geometric-exponent product family.

    The full product vanishes to order d^n at each integer n up to
    n_factors.  Its tail from index ell admits an exact d^ell-th root
    because every exponent there is divisible by d^ell, and the head
    convergence factors admit roots as exponentials; together they satisfy
    head_balanced = (root * prod head_roots^{d^h})^{d^ell} identically.
    """
    if d < 2 or ell < 2:
        raise InputError("need d >= 2 and ell >= 2")
    if n_factors < ell:
        raise InputError("need n_factors >= ell")
    weight = sum(d**n for n in range(1, n_factors + 1))
    if weight > budget:
        raise BudgetExceededError(
            f"total exponent weight {weight} exceeds the budget {budget}"
        )

    def zero_block(n: int, exponent: int) -> list[Factor]:
        return [
            Factor("linear", exponent=exponent, b=float(n)),
            Factor("convfactor", exponent=exponent, n=n, a=float(n)),
        ]

    full = []
    for n in range(1, n_factors + 1):
        full.extend(zero_block(n, d**n))
    tail = []
    for n in range(ell, n_factors + 1):
        tail.extend(zero_block(n, d**n))
    head_convs = [
        Factor("convfactor", exponent=d**h, n=h, a=float(h))
        for h in range(1, ell)
    ]
    root = []
    for n in range(ell, n_factors + 1):
        root.extend(zero_block(n, d ** (n - ell)))
    head_roots = tuple(
        EntireEvaluator(
            [Factor("exppoly", coeffs=tuple(c / d**ell for c in _conv_poly(h, float(h))))]
        )
        for h in range(1, ell)
    )
    return GeometricExponentFamily(
        d=d,
        ell=ell,
        n_factors=n_factors,
        full_product=EntireEvaluator(full),
        tail_product=EntireEvaluator(tail),
        head_balanced=EntireEvaluator(head_convs + tail),
        root=EntireEvaluator(root),
        head_roots=head_roots,
    )
