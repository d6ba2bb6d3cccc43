"""Spherical divisors and spherical orders of slice preserving functions.

A slice preserving polynomial has real coefficients, so its zero set is a
union of real points and full spheres ``[x + yS]``; both are encoded as a
``Sphere`` with ``y = 0`` marking a real point.  A divisor is a finitely
supported integer multiplicity map on spheres.

Two independent routes compute orders:

* ``div`` locates all roots of the real coefficient vector
  (companion-matrix eigenvalues seed a peel-off loop that pins each root
  to machine precision through derivative Newton steps), and
* ``sord`` extracts one prescribed factor repeatedly by synthetic division
  with a residual check.

They are cross-checked against each other by the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import InputError, ZeroFunctionError
from .quaternions import UNIT_I, Quaternion, UnitImaginary
from .series import RegularSeries

#: spheres closer than this in (x, y) are merged into one
MERGE_TOL = 1e-8

#: |Im| below this (relative) classifies a polished root as real
REAL_AXIS_TOL = 1e-8

#: relative residual accepted by one deflation step
DEFLATION_TOL = 1e-7


@dataclass(frozen=True, order=True)
class Sphere:
    """The sphere [x + yS]; y = 0 encodes the real point {x}."""

    x: float
    y: float

    def __post_init__(self):
        # normalize to builtin floats (and -0.0 to 0.0) so JSON stays clean
        object.__setattr__(self, "x", float(self.x) + 0.0)
        object.__setattr__(self, "y", float(self.y) + 0.0)
        if not (self.y >= 0.0):
            raise InputError(f"sphere needs y >= 0, got {self.y!r}")

    @property
    def is_real(self) -> bool:
        return self.y == 0.0

    def close_to(self, other: "Sphere", tol: float = MERGE_TOL) -> bool:
        return abs(self.x - other.x) <= tol and abs(self.y - other.y) <= tol

    def factor_coeffs(self) -> np.ndarray:
        """Real coefficients (ascending) of the minimal vanishing factor:
        (q - x) for a real point, (q - x)^2 + y^2 for a sphere."""
        if self.is_real:
            return np.array([-self.x, 1.0])
        return np.array([self.x * self.x + self.y * self.y, -2.0 * self.x, 1.0])

    def point(self, I: UnitImaginary) -> Quaternion:
        """The representative x + y*I."""
        return Quaternion(self.x) + I * self.y

    def to_json(self) -> dict:
        return {"x": self.x, "y": self.y}


class SphericalDivisor:
    """Finitely supported integer multiplicity assignment to spheres.

    Entries are kept sorted by (x, y); spheres within ``MERGE_TOL`` of each
    other are combined at construction time, and zero multiplicities are
    dropped, so the representation is canonical up to the tolerance.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Iterable[tuple[Sphere, int]] = ()):
        merged: list[tuple[Sphere, int]] = []
        for sphere, mult in entries:
            mult = int(mult)
            if mult == 0:
                continue
            for idx, (s, m) in enumerate(merged):
                if s.close_to(sphere):
                    merged[idx] = (s, m + mult)
                    break
            else:
                merged.append((sphere, mult))
        merged = [(s, m) for (s, m) in merged if m != 0]
        merged.sort(key=lambda e: (e[0].x, e[0].y))
        self._entries = tuple(merged)

    @classmethod
    def empty(cls) -> "SphericalDivisor":
        return cls()

    @property
    def entries(self) -> tuple[tuple[Sphere, int], ...]:
        return self._entries

    @property
    def support(self) -> tuple[Sphere, ...]:
        return tuple(s for s, _ in self._entries)

    @property
    def is_empty(self) -> bool:
        return not self._entries

    @property
    def is_positive(self) -> bool:
        """All multiplicities >= 0 (true for the empty divisor)."""
        return all(m >= 0 for _, m in self._entries)

    def multiplicity(self, sphere: Sphere, tol: float = MERGE_TOL) -> int:
        for s, m in self._entries:
            if s.close_to(sphere, tol):
                return m
        return 0

    def __add__(self, other: "SphericalDivisor") -> "SphericalDivisor":
        if not isinstance(other, SphericalDivisor):
            return NotImplemented
        return SphericalDivisor(self._entries + other._entries)

    def __neg__(self) -> "SphericalDivisor":
        return SphericalDivisor((s, -m) for s, m in self._entries)

    def __sub__(self, other: "SphericalDivisor") -> "SphericalDivisor":
        if not isinstance(other, SphericalDivisor):
            return NotImplemented
        return self + (-other)

    def __eq__(self, other):
        """Same spheres (within the merge tolerance) with the same
        multiplicities; the matching is order-insensitive because the sort
        can swap entries whose coordinates differ only at rounding level."""
        if not isinstance(other, SphericalDivisor):
            return NotImplemented
        if len(self._entries) != len(other._entries):
            return False
        unmatched = list(other._entries)
        for s, m in self._entries:
            for idx, (t, n) in enumerate(unmatched):
                if s.close_to(t) and m == n:
                    del unmatched[idx]
                    break
            else:
                return False
        return True

    __hash__ = None  # tolerance-based equality is incompatible with hashing

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __repr__(self):
        body = ", ".join(f"({s.x:g},{s.y:g}):{m}" for s, m in self._entries)
        return f"SphericalDivisor{{{body}}}"

    def to_json(self) -> list[dict]:
        return [{"x": s.x, "y": s.y, "mult": m} for s, m in self._entries]

    @classmethod
    def from_json(cls, data) -> "SphericalDivisor":
        try:
            return cls(
                (Sphere(float(e["x"]), float(e["y"])), int(e["mult"])) for e in data
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed divisor JSON: {exc}") from exc


def divisor_add(d1: SphericalDivisor, d2: SphericalDivisor) -> SphericalDivisor:
    """Pointwise sum of two divisors."""
    return d1 + d2


# ---------------------------------------------------------------------------
# root finding for real coefficient vectors
# ---------------------------------------------------------------------------


def _trimmed(coeffs: Sequence[float]) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    nz = np.nonzero(c)[0]
    if len(nz) == 0:
        return np.zeros(0)
    return c[: nz[-1] + 1]


def _polish_root(c: np.ndarray, z: complex) -> complex:
    """Newton iteration on p/p', which has a simple zero at every root of p
    regardless of its multiplicity.  Improves a jittered eigenvalue estimate
    of an m-fold root down to roughly eps^(1/m)."""
    d1 = P.polyder(c)
    d2 = P.polyder(d1)
    for _ in range(60):
        pv = P.polyval(z, c)
        p1 = P.polyval(z, d1)
        if pv == 0:
            return z
        p2 = P.polyval(z, d2)
        denom = p1 * p1 - pv * p2
        if denom == 0:
            return z
        step = pv * p1 / denom
        if not (math.isfinite(step.real) and math.isfinite(step.imag)):
            return z
        z = z - step
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            break
    return z


def _newton_simple(c: np.ndarray, z: complex, iters: int = 80) -> complex:
    """Plain Newton for a root of c that is expected to be simple near z.

    Steps are clamped so that noise-floor evaluations (p and p' both tiny
    and uncorrelated near a multiple root) cannot fling the iterate into
    the basin of a distant root."""
    d = P.polyder(c)
    for _ in range(iters):
        pv = P.polyval(z, c)
        dv = P.polyval(z, d)
        if pv == 0 or dv == 0:
            return z
        step = pv / dv
        if not (math.isfinite(step.real) and math.isfinite(step.imag)):
            return z
        limit = 0.5 * max(1.0, abs(z))
        if abs(step) > limit:
            step *= limit / abs(step)
        z = z - step
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    return z


#: ceiling on the factorization backward error of an acceptable candidate
_RECON_CEILING = DEFLATION_TOL

#: a claimed multiplicity must be followed by at least this jump in the
#: backward-error ladder; true locations show a cliff of 1e6 or more while
#: misplaced factors grow gradually (one factor of the location error per
#: extra division) and never jump this hard
_CLIFF = 1e4

#: loose filter: a candidate location must at least be a near-zero of the
#: polynomial (relative to a cancellation-free evaluation) to be worth a
#: full reconstruction test
_NEAR_ZERO_FILTER = 1e-6


def _forced_deflate(work: np.ndarray, sphere: Sphere, times: int) -> np.ndarray:
    factor = sphere.factor_coeffs()
    for _ in range(times):
        work, _ = P.polydiv(work, factor)
    return work


class _LocateFailure(Exception):
    """Internal: this seed did not lead to a verified sphere."""


def _eval_scale(coeffs: np.ndarray, z: complex) -> float:
    """Magnitude of a cancellation-free evaluation at z: the noise floor of
    polyval is a few ulp of this."""
    return float(P.polyval(abs(z), np.abs(coeffs)))


def _residual_ladder(c: np.ndarray, sphere: Sphere, m_max: int) -> list[float]:
    """Backward errors of the claims "the sphere's factor divides c exactly
    m times" for m = 1..m_max: divide the factor out m times (discarding
    remainders), multiply back and compare coefficientwise."""
    factor = sphere.factor_coeffs()
    scale = np.max(np.abs(c))
    quotients = []
    work = c
    for _ in range(m_max):
        if len(work) < len(factor):
            break
        work, _ = P.polydiv(work, factor)
        quotients.append(work)
    ladder = []
    for m in range(1, m_max + 1):
        if m > len(quotients):
            ladder.append(math.inf)
            continue
        recon = quotients[m - 1]
        for _ in range(m):
            recon = P.polymul(recon, factor)
        if len(recon) != len(c):
            ladder.append(math.inf)
        else:
            ladder.append(float(np.max(np.abs(recon - c)) / scale))
    return ladder


def _cliff_multiplicity(c: np.ndarray, sphere: Sphere, budget: int) -> int:
    """Largest m within the budget at which the residual ladder is at noise
    level and then jumps; 0 when the location shows no such cliff."""
    deg_factor = 1 if sphere.is_real else 2
    m_cap = min(budget // deg_factor, (len(c) - 1) // deg_factor)
    if m_cap == 0:
        return 0
    ladder = _residual_ladder(c, sphere, m_cap + 1)
    best = 0
    for m in range(1, m_cap + 1):
        r = ladder[m - 1]
        nxt = ladder[m] if m < len(ladder) else math.inf
        if r <= _RECON_CEILING and nxt >= _CLIFF * max(r, 1e-300):
            best = m
    return best


def _already_taken(sphere: Sphere, count: int, exclude) -> bool:
    taken = sum(seen for s, seen in exclude if s.close_to(sphere))
    return taken >= count


def _locate_sphere(
    c: np.ndarray,
    derivs: list[np.ndarray],
    seed: complex,
    exclude: Sequence[tuple[Sphere, int]],
    budget: int,
    work: np.ndarray,
) -> tuple[Sphere, int]:
    """Pin down one verified zero sphere of c near the seed.

    For every multiplicity hypothesis within the degree budget, the
    location is refined by Newton on the matching derivative (an m-fold
    root of c is a simple root of the (m-1)-th derivative, so the
    refinement reaches machine precision whenever the hypothesis is
    right), and the refined location is then scored by its residual
    cliff.  The deepest cliff-verified reading over all hypotheses wins;
    stalled iterates inside the noise ball of a multiple root show no
    cliff and are discarded.  A candidate must also still divide the
    deflated ``work``: a tolerance-consistent alternative reading of an
    already-peeled root (for example a tiny-radius sphere overlapping a
    peeled double real point) fails that test and is skipped.
    """
    z = _polish_root(c, seed)
    scale0 = max(_eval_scale(c, z), 1e-300)
    best: tuple[int, bool, Sphere] | None = None  # (mult, is_real, sphere)
    seen: list[Sphere] = []
    for m_hyp in range(min(budget, len(c) - 1), 0, -1):
        while len(derivs) < m_hyp:
            derivs.append(P.polyder(derivs[-1]))
        z_m = _newton_simple(derivs[m_hyp - 1], z)
        if abs(P.polyval(z_m, c)) > _NEAR_ZERO_FILTER * scale0:
            continue
        if abs(z_m.imag) <= REAL_AXIS_TOL * max(1.0, abs(z_m.real)):
            sphere = Sphere(z_m.real, 0.0)
        else:
            sphere = Sphere(z_m.real, abs(z_m.imag))
        if any(sphere.close_to(s) for s in seen):
            continue
        seen.append(sphere)
        m = _cliff_multiplicity(c, sphere, budget)
        if m == 0:
            continue
        if _residual_ladder(work, sphere, 1)[0] > _RECON_CEILING:
            continue
        if best is None or (m, sphere.is_real) > best[:2]:
            best = (m, sphere.is_real, sphere)
    if best is None:
        raise _LocateFailure(f"no verified sphere near {seed!r}")
    m, _, sphere = best
    if _already_taken(sphere, m, exclude):
        # wandered onto a sphere that was already fully peeled
        raise _LocateFailure(str(sphere))
    return sphere, m


def real_poly_spheres(coeffs: Sequence[float]) -> list[tuple[Sphere, int]]:
    """Spheres and multiplicities of a nonzero real coefficient vector.

    Roots are peeled off one sphere at a time: the eigenvalues of the
    (deflated) companion matrix only seed the search, while locations and
    multiplicities are always measured against the original coefficients,
    so deflation noise never degrades them.  Returns the empty list for
    nonzero constants; raises ``ZeroFunctionError`` for the zero polynomial
    and ``ArithmeticError`` if the peeled spheres fail to account for the
    full degree.
    """
    c = _trimmed(coeffs)
    if len(c) == 0:
        raise ZeroFunctionError("the zero function has no divisor")
    derivs = [c]
    out: list[tuple[Sphere, int]] = []
    work = c
    remaining = len(c) - 1
    while len(work) > 1:
        raw = np.roots(work[::-1])
        seeds = sorted(
            (complex(z.real, abs(z.imag)) for z in raw),
            key=lambda z: (-z.imag, z.real),
        )
        progressed = False
        for seed in seeds:
            try:
                sphere, count = _locate_sphere(c, derivs, seed, out, remaining, work)
            except _LocateFailure:
                continue
            # the count was measured against the original polynomial; drop
            # whatever an earlier peel of the same sphere already took
            count -= sum(seen for s, seen in out if s.close_to(sphere))
            used = count * (1 if sphere.is_real else 2)
            if count <= 0 or used > remaining:
                continue
            for idx, (s, seen) in enumerate(out):
                if s.close_to(sphere):
                    out[idx] = (s, seen + count)
                    break
            else:
                out.append((sphere, count))
            work = _forced_deflate(work, sphere, count)
            remaining -= used
            progressed = True
            break
        if not progressed:
            raise ArithmeticError(
                f"cannot resolve the remaining degree-{len(work) - 1} factor"
            )
    if remaining != 0:
        raise ArithmeticError("root extraction does not account for the degree")
    # final soundness check: the factored form must reproduce the input
    recon = np.array([float(c[-1])])
    for sphere, mult in out:
        recon = _forced_multiply(recon, sphere, mult)
    if len(recon) != len(c) or np.max(np.abs(recon - c)) > 1e-6 * np.max(np.abs(c)):
        raise ArithmeticError("extracted spheres do not reproduce the polynomial")
    out.sort(key=lambda e: (e[0].x, e[0].y))
    return out


def _forced_multiply(work: np.ndarray, sphere: Sphere, times: int) -> np.ndarray:
    factor = sphere.factor_coeffs()
    for _ in range(times):
        work = P.polymul(work, factor)
    return work


# ---------------------------------------------------------------------------
# sord / div / holomorphy on polynomials and rationals
# ---------------------------------------------------------------------------


def _as_real_poly(f: RegularSeries) -> np.ndarray:
    if not isinstance(f, RegularSeries):
        raise InputError(f"expected a series, got {type(f).__name__}")
    if not f.exact:
        raise InputError("divisor operations need exact polynomials")
    if not f.is_slice_preserving:
        raise InputError("divisor operations need slice preserving polynomials")
    if f.center != 0.0:
        f = f.recenter(0.0)
    c = f.real_coeffs()
    if len(c) == 0:
        raise ZeroFunctionError("operation undefined for the zero function")
    return c


def sord_coeffs(coeffs: np.ndarray, sphere: Sphere) -> int:
    """Largest power of the sphere's factor dividing the coefficient vector,
    detected by repeated synthetic division: the factor is divided out as
    long as multiplying the quotient back still reproduces the coefficients
    (residual at noise level, followed by a sharp jump)."""
    work = _trimmed(coeffs)
    if len(work) == 0:
        raise ZeroFunctionError("spherical order of the zero function")
    return _cliff_multiplicity(work, sphere, len(work) - 1)


def _is_rational(f) -> bool:
    return hasattr(f, "num") and hasattr(f, "den")


def sord(f, sphere: Sphere) -> int:
    """Spherical order of f at a sphere: the exact exponent of the factor
    (q - x)^2 + y^2 (or q - x for real points) extractable from f.

    ``f`` is a slice preserving polynomial or a rational; for rationals the
    order is sord(num) - sord(den), negative on pole spheres.
    """
    if _is_rational(f):
        if f.num.is_zero:
            raise ZeroFunctionError("spherical order of the zero function")
        return sord_coeffs(_as_real_poly(f.num), sphere) - sord_coeffs(
            _as_real_poly(f.den), sphere
        )
    return sord_coeffs(_as_real_poly(f), sphere)


def div(f) -> SphericalDivisor:
    """Divisor of a slice preserving polynomial or rational: every sphere
    with a nonzero spherical order, with that order as multiplicity."""
    if _is_rational(f):
        if f.num.is_zero:
            raise ZeroFunctionError("divisor of the zero function")
        return div(f.num) - div(f.den)
    c = _as_real_poly(f)
    return SphericalDivisor(real_poly_spheres(c))


def holomorphy_check(f) -> bool:
    """True iff div(f) >= 0, i.e. f extends to an entire slice preserving
    function (for normalized rationals: the denominator is constant)."""
    return div(f).is_positive


# ---------------------------------------------------------------------------
# zeros of star polynomials with quaternion coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StarZero:
    """One zero locus of a star polynomial: either an isolated point, or a
    whole sphere (point is then a representative of the sphere)."""

    sphere: Sphere
    point: Quaternion
    isolated: bool


def star_roots(f: RegularSeries, tol: float = 1e-9) -> list[StarZero]:
    """Zero set of a star polynomial with quaternion coefficients.

    The symmetrization f star conj(f) has real coefficients and vanishes
    exactly on the spheres through the zeros of f.  On each such sphere
    [x + yS] the value f(x + yI) is affine in I, so the zero is either the
    whole sphere or the single point solving A + I*B = 0.
    """
    if not f.exact:
        raise InputError("root finding needs an exact polynomial")
    if f.center != 0.0:
        f = f.recenter(0.0)
    if f.is_zero:
        raise ZeroFunctionError("the zero polynomial vanishes everywhere")
    sym = f.symmetrization()
    spheres = [s for s, _ in real_poly_spheres(sym.real_coeffs())]
    scale = max(1.0, max(abs(c) for c in f.coeffs))
    out: list[StarZero] = []
    for sphere in spheres:
        if sphere.is_real:
            out.append(StarZero(sphere, Quaternion(sphere.x), isolated=True))
            continue
        x, y = sphere.x, sphere.y
        # (x + yI)^n = alpha_n + beta_n I with real alpha, beta
        A = Quaternion(0.0)
        B = Quaternion(0.0)
        alpha, beta = 1.0, 0.0
        for a in f.coeffs:
            A = A + a * alpha
            B = B + a * beta
            alpha, beta = alpha * x - beta * y, alpha * y + beta * x
        local = max(1.0, scale * max(1.0, math.hypot(x, y)) ** max(f.degree, 0))
        if abs(B) <= tol * local:
            if abs(A) <= tol * local:
                # the whole sphere vanishes; report a representative
                out.append(StarZero(sphere, sphere.point(UNIT_I), isolated=False))
            # else: no zero of f on this sphere (conjugate-side sphere)
            continue
        unit = -(A * B.inverse())
        # the solution must be a unit imaginary; renormalize the residue away
        direction = unit.imag()
        n = direction.imag_norm()
        if n == 0.0 or abs(abs(unit) - 1.0) > 1e-6 or abs(unit.w) > 1e-6:
            continue
        I = UnitImaginary(direction.x / n, direction.y / n, direction.z / n)
        out.append(StarZero(sphere, Quaternion(x) + I * y, isolated=True))
    return out
