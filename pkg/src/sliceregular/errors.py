"""Exception hierarchy shared by all modules.

Three top-level families matter to callers (and to the CLI exit codes):
``InputError`` for precondition violations on well-formed data,
``MathematicalError`` for operations that are undefined at the given
argument (poles, zero functions, divergence), and ``VerificationError``
for checks that were asked to hold and did not.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all errors raised by this package."""


class InputError(EngineError, ValueError):
    """A precondition on the arguments is violated."""


class CenterMismatchError(InputError):
    """Series combined with different expansion centers."""


class OrthogonalityError(InputError):
    """A pair of imaginary units that must be orthogonal is not."""


class CompositionError(InputError):
    """Inner function of a composition is not slice preserving."""


class NegativeMultiplicityError(InputError):
    """A divisor that must be positive has a negative multiplicity."""


class BudgetExceededError(InputError):
    """A product family exceeds the configured exponent budget."""


class MathematicalError(EngineError, ArithmeticError):
    """The operation is mathematically undefined for this argument."""


class ZeroFunctionError(MathematicalError):
    """An order, divisor or inverse of the zero function was requested."""


class PoleEvaluationError(MathematicalError):
    """Evaluation was requested on a pole sphere."""


class DivergenceError(MathematicalError):
    """Evaluation outside the declared radius of a truncated series."""


class VerificationError(EngineError):
    """A required identity failed; carries a witness of the failure."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}
