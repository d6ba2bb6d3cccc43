"""Evaluation characters, composition recovery, and order valuations.

A pair (c, J) induces the algebra map f -> [f(c)]_J: evaluate at c, then
carry the value to the complex line of J.  These are exactly the algebra
characters of the slice preserving functions, and an algebra endomorphism
phi is composition with the function h = phi(identity); ``bers_recover``
extracts h and checks the composition law pointwise.

Valuations are integer-valued maps on the nonzero rationals satisfying
v(fg) = v(f) + v(g) and v(f+g) >= min(v(f), v(g)); the spherical order at
a fixed sphere is the canonical family.  Axiom checking runs the laws on
sample sets and reports violations with witnesses instead of raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .divisors import Sphere, sord
from .errors import InputError, PoleEvaluationError, VerificationError
from .quaternions import Quaternion, UnitImaginary, as_quaternion, slice_decompose
from .rationals import SemiregularRational
from .series import RegularSeries, compose_slice_preserving


@dataclass(frozen=True)
class EvaluationCharacter:
    """The character f -> [f(c)]_J attached to a point and a target line."""

    c: Quaternion
    J: UnitImaginary

    def apply(self, f) -> Quaternion:
        return apply_character(self, f)

    __call__ = apply


def apply_character(chi: EvaluationCharacter, f) -> Quaternion:
    """Evaluate f at the character's point and carry the value to C_J.

    The carry is the line isomorphism x + y*I_c -> x + y*J with the sign
    of y read off the point's own unit I_c; using |y| instead would break
    additivity and real linearity whenever a value lands on the opposite
    half of the line.  For a real point all values are real and J is
    irrelevant.
    """
    if isinstance(f, SemiregularRational):
        sphere = Sphere(chi.c.w, chi.c.imag_norm())
        if sord(f, sphere) < 0:
            raise PoleEvaluationError(f"character point {chi.c!r} is a pole")
        value = f.evaluate(chi.c)
    elif isinstance(f, RegularSeries):
        value = f.evaluate(chi.c)
    else:
        value = as_quaternion(f)
    _, _, unit = slice_decompose(chi.c)
    if unit is None:
        return Quaternion(value.w, value.x, value.y, value.z)
    signed = value.imag().dot(unit)
    return Quaternion(value.w) + chi.J * signed


@dataclass(frozen=True)
class AxiomCheck:
    """Outcome of one axiom over a sample set; witness is the first failure."""

    axiom: str
    passed: bool
    witness: Optional[dict] = None
    max_error: float = 0.0

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "passed": self.passed, "witness": self.witness}


def _rel_err(got: Quaternion, want: Quaternion) -> float:
    return abs(got - want) / max(1.0, abs(want))


def check_character_axioms(
    chi: EvaluationCharacter,
    sample_fs: Sequence[RegularSeries],
    trials: int = 8,
    tol: float = 1e-9,
    seed: int = 0,
) -> list[AxiomCheck]:
    """Test additivity, real-scalar compatibility and multiplicativity on
    all sample pairs; violations become report entries, never exceptions.

    The samples must be slice preserving polynomials (the characters live
    on that algebra; multiplicativity genuinely fails off it).
    """
    for f in sample_fs:
        if not isinstance(f, RegularSeries) or not f.is_slice_preserving:
            raise InputError("character samples must be slice preserving polynomials")
    rng = np.random.default_rng(seed)
    checks: list[AxiomCheck] = []

    one = RegularSeries.constant(1.0)
    err = _rel_err(apply_character(chi, one), Quaternion(1.0))
    checks.append(
        AxiomCheck(
            "nontriviality",
            err <= tol,
            None if err <= tol else {"value": apply_character(chi, one).to_json()},
            err,
        )
    )

    worst = 0.0
    witness = None
    for i, f in enumerate(sample_fs):
        for g in sample_fs[i:]:
            got = apply_character(chi, f + g)
            want = apply_character(chi, f) + apply_character(chi, g)
            e = _rel_err(got, want)
            if e > worst:
                worst, witness = e, {"f": f.to_json(), "g": g.to_json(), "error": e}
    checks.append(AxiomCheck("additivity", worst <= tol, None if worst <= tol else witness, worst))

    worst = 0.0
    witness = None
    for f in sample_fs:
        for _ in range(trials):
            r = float(rng.uniform(-3.0, 3.0))
            got = apply_character(chi, f * r)
            want = apply_character(chi, f) * r
            e = _rel_err(got, want)
            if e > worst:
                worst, witness = e, {"f": f.to_json(), "scalar": r, "error": e}
    checks.append(AxiomCheck("real-scalar", worst <= tol, None if worst <= tol else witness, worst))

    worst = 0.0
    witness = None
    for f in sample_fs:
        for g in sample_fs:
            got = apply_character(chi, f.star(g))
            want = apply_character(chi, f) * apply_character(chi, g)
            e = _rel_err(got, want)
            if e > worst:
                worst, witness = e, {"f": f.to_json(), "g": g.to_json(), "error": e}
    checks.append(
        AxiomCheck("multiplicativity", worst <= tol, None if worst <= tol else witness, worst)
    )
    return checks


def bers_recover(
    phi: Callable[[RegularSeries], RegularSeries],
    sample_fs: Optional[Sequence[RegularSeries]] = None,
    points: Optional[Sequence[Quaternion]] = None,
    tol: float = 1e-8,
    seed: int = 0,
) -> RegularSeries:
    """Recover the inner function of a composition homomorphism.

    For phi(f) = f after composition with a hidden slice preserving h, the
    image of the identity is h itself.  The recovered h is verified
    pointwise: phi(f)(q) must match f(h(q)) at the sample functions and
    points, else a ``VerificationError`` carries the witness.
    """
    h = phi(RegularSeries.identity())
    if not isinstance(h, RegularSeries) or not h.is_slice_preserving:
        raise VerificationError("the recovered image of the identity is not slice preserving")
    rng = np.random.default_rng(seed)
    if sample_fs is None:
        sample_fs = [
            RegularSeries.identity(),
            RegularSeries.from_real_coeffs([0.0, 0.0, 1.0]),
            RegularSeries.from_real_coeffs([1.0, -2.0, 0.0, 1.0]),
            RegularSeries.from_real_coeffs(rng.uniform(-2, 2, size=4)),
        ]
    if points is None:
        points = [Quaternion(*rng.uniform(-1.5, 1.5, size=4)) for _ in range(20)]
    for f in sample_fs:
        image = phi(f)
        for q in points:
            got = image.evaluate(q)
            want = f.evaluate(h.evaluate(q))
            if _rel_err(got, want) > tol:
                raise VerificationError(
                    "composition law fails for the recovered function",
                    witness={
                        "f": f.to_json(),
                        "point": as_quaternion(q).to_json(),
                        "phi_f": got.to_json(),
                        "f_of_h": want.to_json(),
                    },
                )
    return h


@dataclass(frozen=True)
class Valuation:
    """Integer-valued multiplicative order function on nonzero rationals.

    ``kind`` is "sord" for the spherical order at a fixed sphere, or
    "custom" for a user-supplied map (whose axioms are checked, not
    assumed).  The zero function maps to +inf by convention.
    """

    kind: str
    sphere: Optional[Sphere] = None
    fn: Callable[[SemiregularRational], int] = field(default=None, repr=False)

    def __call__(self, f) -> float:
        if isinstance(f, RegularSeries):
            f = SemiregularRational(f)
        elif isinstance(f, (int, float)):
            f = SemiregularRational.constant(float(f))
        if f.is_zero:
            return math.inf
        return int(self.fn(f))


def sord_valuation(sphere: Sphere) -> Valuation:
    """The valuation counting the sphere's factor in numerator minus
    denominator."""
    return Valuation(kind="sord", sphere=sphere, fn=lambda f: sord(f, sphere))


def custom_valuation(fn: Callable[[SemiregularRational], int]) -> Valuation:
    return Valuation(kind="custom", fn=fn)


def check_valuation_axioms(
    v: Valuation, samples: Sequence[SemiregularRational]
) -> list[AxiomCheck]:
    """Run the valuation laws over all sample pairs.

    V1 (v(fg) = v(f) + v(g)) is integer-exact; V2 applies to pairs that do
    not cancel and V2' to pairs with distinct values.  For the spherical
    order family two extra sanity rows are included: nonnegativity on
    polynomial samples and on the identity (these hold for every valuation
    but are only machine-checkable for this concrete family).
    """
    samples = [
        s if isinstance(s, SemiregularRational) else SemiregularRational(s)
        for s in samples
    ]
    checks: list[AxiomCheck] = []

    witness = None
    for i, f in enumerate(samples):
        for g in samples[i:]:
            lhs = v(f * g)
            rhs = v(f) + v(g)
            if lhs != rhs:
                witness = {"f": f.to_json(), "g": g.to_json(), "v(fg)": lhs, "v(f)+v(g)": rhs}
                break
        if witness:
            break
    checks.append(AxiomCheck("V1", witness is None, witness))

    witness = None
    for i, f in enumerate(samples):
        for g in samples[i:]:
            s = f + g
            if s.is_zero:
                continue
            if v(s) < min(v(f), v(g)):
                witness = {
                    "f": f.to_json(), "g": g.to_json(),
                    "v(f+g)": v(s), "min": min(v(f), v(g)),
                }
                break
        if witness:
            break
    checks.append(AxiomCheck("V2", witness is None, witness))

    witness = None
    for i, f in enumerate(samples):
        for g in samples[i:]:
            if v(f) == v(g):
                continue
            s = f + g
            if s.is_zero:
                continue
            if v(s) != min(v(f), v(g)):
                witness = {
                    "f": f.to_json(), "g": g.to_json(),
                    "v(f+g)": v(s), "min": min(v(f), v(g)),
                }
                break
        if witness:
            break
    checks.append(AxiomCheck("V2-prime", witness is None, witness))

    witness = None
    for r in (1.0, -1.0, 2.0, 0.5, math.pi):
        if v(SemiregularRational.constant(r)) != 0:
            witness = {"constant": r, "value": v(SemiregularRational.constant(r))}
            break
    checks.append(AxiomCheck("constants-zero", witness is None, witness))

    if v.kind == "sord":
        witness = None
        for f in samples:
            if f.is_polynomial and v(f) < 0:
                witness = {"f": f.to_json(), "value": v(f)}
                break
        checks.append(AxiomCheck("regular-nonnegative[sord]", witness is None, witness))
        vid = v(SemiregularRational.identity())
        checks.append(
            AxiomCheck(
                "identity-nonnegative[sord]",
                vid >= 0,
                None if vid >= 0 else {"value": vid},
            )
        )
    return checks
