"""
Exceptions raised by ellint.

Two families exist. :class:`ValidationError` covers bad input (it is also a
``ValueError``) and :class:`NumericalError` covers computations that could not
be carried out to the requested accuracy (it is also an ``ArithmeticError``).
The command line interface maps the first family to exit status 2 and the
second to exit status 3.
"""


class EllintError(Exception):
    """Base class of every error raised by ellint."""


class ValidationError(EllintError, ValueError):
    """An argument violates the precondition of an operation."""


class NumericalError(EllintError, ArithmeticError):
    """A numerical procedure failed or would exceed its budget."""


# graphs
class UnknownVertexError(ValidationError):
    pass


class DuplicateVertexError(ValidationError):
    pass


class NegativeDecorationError(ValidationError):
    pass


class SelfLoopContractionError(ValidationError):
    pass


class InvalidEdgeIndexError(ValidationError):
    pass


class SelfLoopPresentError(ValidationError):
    pass


class DisconnectedError(ValidationError):
    pass


class SeedsOverlapError(ValidationError):
    pass


class NotSimpleError(ValidationError):
    pass


class ParseError(ValidationError):
    pass


# polynomials
class UnsupportedArityError(ValidationError):
    pass


class WrongShapeError(ValidationError):
    pass


# modular forms and propagators
class OddWeightError(ValidationError):
    pass


class PoleAtLatticePointError(ValidationError):
    pass


class UnsupportedError(ValidationError):
    pass


class NonpositiveTimeError(ValidationError):
    pass


# engine
class StepTooLargeError(ValidationError):
    pass


class UnsupportedTopologyError(ValidationError):
    """The requested evaluation method cannot handle this graph shape."""


class QuadratureFailure(NumericalError):
    pass


class QuadratureBudgetExceeded(NumericalError):
    pass


class IllConditionedFit(NumericalError):
    pass


__all__ = [
    "EllintError",
    "ValidationError",
    "NumericalError",
    "UnknownVertexError",
    "DuplicateVertexError",
    "NegativeDecorationError",
    "SelfLoopContractionError",
    "InvalidEdgeIndexError",
    "SelfLoopPresentError",
    "DisconnectedError",
    "SeedsOverlapError",
    "NotSimpleError",
    "ParseError",
    "UnsupportedArityError",
    "WrongShapeError",
    "OddWeightError",
    "PoleAtLatticePointError",
    "UnsupportedError",
    "NonpositiveTimeError",
    "StepTooLargeError",
    "UnsupportedTopologyError",
    "QuadratureFailure",
    "QuadratureBudgetExceeded",
    "IllConditionedFit",
]
