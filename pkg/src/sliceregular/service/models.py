"""Pydantic request/response models for the compute service.

The wire formats mirror the library's JSON encodings: quaternions are
[w, x, y, z] arrays, unit imaginaries [x, y, z], series carry a center,
a coefficient list and an exactness flag, divisors are sorted entry
lists, and evaluators are factor lists.
"""

from __future__ import annotations

import math
from typing import Annotated, Literal, Optional, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_validator,
)

from ..divisors import Sphere, SphericalDivisor
from ..products import EntireEvaluator, Factor
from ..quaternions import Quaternion
from ..rationals import SemiregularRational
from ..series import RegularSeries

QuaternionJSON = Annotated[list[float], Field(min_length=4, max_length=4)]


def _require_finite(values: list[float]) -> list[float]:
    if not all(math.isfinite(v) for v in values):
        raise ValueError("components must be finite numbers")
    return values


class SeriesModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    center: float = 0.0
    coeffs: list[QuaternionJSON]
    exact: bool = True

    @field_validator("coeffs")
    @classmethod
    def _finite(cls, coeffs):
        for c in coeffs:
            _require_finite(c)
        return coeffs

    def to_series(self) -> RegularSeries:
        return RegularSeries(
            [Quaternion(*c) for c in self.coeffs], center=self.center, exact=self.exact
        )

    @classmethod
    def from_series(cls, s: RegularSeries) -> "SeriesModel":
        return cls(center=s.center, coeffs=[c.to_json() for c in s.coeffs], exact=s.exact)


class RationalModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    num: SeriesModel
    den: SeriesModel

    def to_rational(self) -> SemiregularRational:
        return SemiregularRational(self.num.to_series(), self.den.to_series())

    @classmethod
    def from_rational(cls, r: SemiregularRational) -> "RationalModel":
        return cls(
            num=SeriesModel.from_series(r.num), den=SeriesModel.from_series(r.den)
        )


FunctionModel = Union[RationalModel, SeriesModel]


def function_to_object(f: FunctionModel):
    return f.to_rational() if isinstance(f, RationalModel) else f.to_series()


class DivisorEntryModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    x: float
    y: float = Field(ge=0.0)
    mult: int

    @field_validator("mult")
    @classmethod
    def _nonzero(cls, v):
        if v == 0:
            raise ValueError("multiplicity must be nonzero")
        return v


def divisor_to_object(entries: list[DivisorEntryModel]) -> SphericalDivisor:
    return SphericalDivisor((Sphere(e.x, e.y), e.mult) for e in entries)


def divisor_to_models(d: SphericalDivisor) -> list[DivisorEntryModel]:
    return [DivisorEntryModel(x=float(s.x), y=float(s.y), mult=m) for s, m in d]


class FactorModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["power", "linear", "spherical", "convfactor", "exppoly"]
    exponent: int = 1
    b: Optional[float] = None
    x: Optional[float] = None
    y: Optional[float] = None
    n: Optional[int] = None
    a: Optional[float] = None
    coeffs: Optional[list[float]] = None

    def to_factor(self) -> Factor:
        return Factor(
            kind=self.kind,
            exponent=self.exponent,
            b=self.b,
            x=self.x,
            y=self.y,
            n=self.n,
            a=self.a,
            coeffs=tuple(self.coeffs) if self.coeffs is not None else None,
        )

    @classmethod
    def from_factor(cls, f: Factor) -> "FactorModel":
        return cls(**f.to_json())


class EvaluatorModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    factors: list[FactorModel]

    def to_evaluator(self) -> EntireEvaluator:
        return EntireEvaluator(f.to_factor() for f in self.factors)

    @classmethod
    def from_evaluator(cls, e: EntireEvaluator) -> "EvaluatorModel":
        return cls(factors=[FactorModel.from_factor(f) for f in e.factors])


# -- request / response pairs --------------------------------------------------


class EvalRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    f: FunctionModel
    point: QuaternionJSON
    truncation: Optional[int] = None

    @field_validator("point")
    @classmethod
    def _finite_point(cls, v):
        return _require_finite(v)


class EvalResponse(BaseModel):
    value: QuaternionJSON


class StarRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    f: SeriesModel
    g: SeriesModel


class StarResponse(BaseModel):
    product: SeriesModel


class DivisorRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    f: FunctionModel


class DivisorResponse(BaseModel):
    divisor: list[DivisorEntryModel]


class ConstructRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    divisor: list[DivisorEntryModel]
    genus: int = Field(default=0, ge=0)


class ConstructResponse(BaseModel):
    evaluator: EvaluatorModel


class FactorEntryModel(BaseModel):
    b: float
    mult: int


class SphericalFactorEntryModel(BaseModel):
    x: float
    y: float
    mult: int


class FactorRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    f: SeriesModel


class FactorResponse(BaseModel):
    m: int
    real_factors: list[FactorEntryModel]
    spherical_factors: list[SphericalFactorEntryModel]
    h: float


class LaurentRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    f: FunctionModel
    point: QuaternionJSON
    n_min: int = -5
    n_max: int = 15

    @field_validator("point")
    @classmethod
    def _finite_point(cls, v):
        return _require_finite(v)


class LaurentResponse(BaseModel):
    n_min: int
    n_max: int
    coefficients: list[QuaternionJSON]


class RootsRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    coeffs: list[float]
    ell: int = Field(ge=1)
    samples: int = Field(default=20, ge=1)
    seed: int = 0
    tolerance: float = 1e-9

    @field_validator("coeffs")
    @classmethod
    def _finite_coeffs(cls, v):
        return _require_finite(v)


class RootsResponse(BaseModel):
    evaluator: EvaluatorModel
    samples: int
    max_relative_error: float
    passed: bool


class IsssaRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    d: int = Field(default=2, ge=2)
    ell: int = Field(default=2, ge=2)
    n_factors: int = Field(default=3, ge=2)
    samples: int = Field(default=20, ge=1)
    seed: int = 0
    tolerance: float = 1e-6


class MultiplicityModel(BaseModel):
    at: float
    mult: int


class IsssaResponse(BaseModel):
    samples: int
    max_relative_error: float
    multiplicities: list[MultiplicityModel]
    passed: bool


class VerifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    suite: str = "all"
    seed: int = 7


class SuiteModel(BaseModel):
    name: str
    passed: bool
    checks: int
    max_error: float
    failures: list[dict]


class VerifyResponse(BaseModel):
    seed: int
    passed: bool
    passed_count: int
    failed_count: int
    suites: list[SuiteModel]
