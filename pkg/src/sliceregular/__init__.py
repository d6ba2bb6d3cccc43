"""Quaternionic slice-function engine.

Quaternion arithmetic, regular power series with the star product,
spherical divisors and orders, the quotient field of slice preserving
polynomials, Weierstrass-type factor products, evaluation characters and
order valuations — with a seeded verification gate over all of it.
"""

from .characters import (
    AxiomCheck,
    EvaluationCharacter,
    Valuation,
    apply_character,
    bers_recover,
    check_character_axioms,
    check_valuation_axioms,
    custom_valuation,
    sord_valuation,
)
from .divisors import (
    Sphere,
    SphericalDivisor,
    StarZero,
    div,
    divisor_add,
    holomorphy_check,
    sord,
    star_roots,
)
from .errors import (
    BudgetExceededError,
    CenterMismatchError,
    CompositionError,
    DivergenceError,
    EngineError,
    InputError,
    MathematicalError,
    NegativeMultiplicityError,
    OrthogonalityError,
    PoleEvaluationError,
    VerificationError,
    ZeroFunctionError,
)
from .products import (
    EntireEvaluator,
    Factor,
    GeometricExponentFamily,
    PolynomialFactorization,
    construct_from_divisor,
    convergence_factor,
    exp_poly_root,
    factorize_polynomial,
    isssa_family,
)
from .quaternions import (
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
from .rationals import (
    SemiregularRational,
    Singularity,
    classify_singularity,
    in_sigma_region,
    laurent_coefficients,
    normalize,
    sigma_tau,
)
from .series import (
    ComplexSeries,
    RegularSeries,
    compose_slice_preserving,
    embed_complex,
    extend_from_slice,
    representation_combine,
    slice_coordinate,
    split,
    star_product,
    star_product_via_splitting,
)
from .verification import SUITES, SuiteResult, run_all, run_suite

__version__ = "0.1.0"
