"""Service operations: validated request in, response model out.

The FastAPI endpoints and the command line client both call these, so one
implementation serves both transports.  Domain errors propagate as the
library's exception types; the callers translate them to HTTP statuses or
exit codes.
"""

from __future__ import annotations

import numpy as np

from .. import verification
from ..divisors import Sphere, div, sord
from ..products import construct_from_divisor, exp_poly_root, factorize_polynomial, isssa_family
from ..quaternions import Quaternion, exp_quaternion
from ..rationals import SemiregularRational, laurent_coefficients
from ..series import RegularSeries
from . import models as m


def op_eval(req: m.EvalRequest) -> m.EvalResponse:
    f = m.function_to_object(req.f)
    if (
        isinstance(f, RegularSeries)
        and not f.exact
        and req.truncation is not None
        and len(f.coeffs) > req.truncation + 1
    ):
        f = RegularSeries(
            f.coeffs[: req.truncation + 1], center=f.center, exact=False
        )
    value = f.evaluate(Quaternion(*req.point))
    return m.EvalResponse(value=value.to_json())


def op_star(req: m.StarRequest) -> m.StarResponse:
    product = req.f.to_series().star(req.g.to_series())
    return m.StarResponse(product=m.SeriesModel.from_series(product))


def op_divisor(req: m.DivisorRequest) -> m.DivisorResponse:
    d = div(m.function_to_object(req.f))
    return m.DivisorResponse(divisor=m.divisor_to_models(d))


def op_construct(req: m.ConstructRequest) -> m.ConstructResponse:
    evaluator = construct_from_divisor(m.divisor_to_object(req.divisor), req.genus)
    return m.ConstructResponse(evaluator=m.EvaluatorModel.from_evaluator(evaluator))


def op_factor(req: m.FactorRequest) -> m.FactorResponse:
    fac = factorize_polynomial(req.f.to_series())
    return m.FactorResponse(
        m=fac.m,
        real_factors=[m.FactorEntryModel(b=b, mult=k) for b, k in fac.real_factors],
        spherical_factors=[
            m.SphericalFactorEntryModel(x=x, y=y, mult=k)
            for x, y, k in fac.spherical_factors
        ],
        h=fac.h,
    )


def op_laurent(req: m.LaurentRequest) -> m.LaurentResponse:
    f = m.function_to_object(req.f)
    if isinstance(f, RegularSeries):
        f = SemiregularRational(f)
    coeffs = laurent_coefficients(f, Quaternion(*req.point), req.n_min, req.n_max)
    return m.LaurentResponse(
        n_min=req.n_min,
        n_max=req.n_max,
        coefficients=[c.to_json() for c in coeffs],
    )


def op_roots(req: m.RootsRequest) -> m.RootsResponse:
    root = exp_poly_root(req.coeffs, req.ell)
    poly = RegularSeries.from_real_coeffs(req.coeffs)
    rng = np.random.default_rng(req.seed)
    worst = 0.0
    for _ in range(req.samples):
        q = Quaternion(*rng.uniform(-1.2, 1.2, 4))
        got = root.evaluate(q) ** req.ell
        want = exp_quaternion(poly.evaluate(q))
        worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    return m.RootsResponse(
        evaluator=m.EvaluatorModel.from_evaluator(root),
        samples=req.samples,
        max_relative_error=worst,
        passed=worst <= req.tolerance,
    )


def op_isssa(req: m.IsssaRequest) -> m.IsssaResponse:
    family = isssa_family(req.d, req.ell, req.n_factors)
    rng = np.random.default_rng(req.seed)
    worst = 0.0
    for _ in range(req.samples):
        q = Quaternion(*rng.uniform(-0.2, 0.2, 4))
        lhs = family.head_balanced.evaluate(q)
        rhs = family.root_side(q)
        worst = max(worst, abs(lhs - rhs) / max(1e-30, abs(lhs)))
    part = family.full_product.polynomial_part()
    mults = [
        m.MultiplicityModel(at=float(n), mult=sord(part, Sphere(float(n), 0.0)))
        for n in range(1, req.n_factors + 1)
    ]
    expected = all(entry.mult == req.d**int(entry.at) for entry in mults)
    return m.IsssaResponse(
        samples=req.samples,
        max_relative_error=worst,
        multiplicities=mults,
        passed=worst <= req.tolerance and expected,
    )


def op_verify(req: m.VerifyRequest) -> m.VerifyResponse:
    if req.suite == "all":
        results = verification.run_all(req.seed)
    else:
        results = [verification.run_suite(req.suite, req.seed)]
    suites = [m.SuiteModel(**r.to_json()) for r in results]
    passed = sum(1 for s in suites if s.passed)
    return m.VerifyResponse(
        seed=req.seed,
        passed=passed == len(suites),
        passed_count=passed,
        failed_count=len(suites) - passed,
        suites=suites,
    )
