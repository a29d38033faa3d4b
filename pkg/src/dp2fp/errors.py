"""Domain errors with stable machine-readable codes.

Every error that can surface through the CLI carries a ``code`` attribute;
the JSON emitter copies it verbatim so scripted consumers can dispatch on
it without parsing messages.
"""

from __future__ import annotations


class Dp2Error(Exception):
    """Base class for all domain errors raised by this package."""

    code = "ERROR"


class InvalidPrimeError(Dp2Error):
    """The modulus is not an odd prime (p = 2 is rejected everywhere)."""

    code = "INVALID_PRIME"


class DivisionByZeroError(Dp2Error):
    """Division by an exact zero in the active arithmetic carrier."""

    code = "DIVISION_BY_ZERO"


class NegativeValuationError(Dp2Error):
    """Attempt to reduce a rational with a pole at p (valuation < 0)."""

    code = "NEGATIVE_VALUATION"


class ModulusMismatchError(Dp2Error):
    """Arithmetic mixing residues of two different prime fields."""

    code = "MODULUS_MISMATCH"


class PoleAtZeroError(Dp2Error):
    """eval at 0 requested for a perturbation function with a pole there."""

    code = "POLE_AT_ZERO"


class DegreeOverflowError(Dp2Error):
    """Perturbation-function degrees blew past the configured bound."""

    code = "DEGREE_OVERFLOW"


class NoExactZeroError(Dp2Error):
    """No integer shift places an exact zero in a coefficient table."""

    code = "NO_EXACT_ZERO"


class NonIntegralParameterError(Dp2Error):
    """A map parameter has negative valuation at the working prime."""

    code = "NON_INTEGRAL_PARAMETER"


class ZeroTauDenominatorError(Dp2Error):
    """A tau determinant in the denominator vanishes exactly over Q."""

    code = "ZERO_TAU_DENOMINATOR"


class InfiniteInitialError(Dp2Error):
    """Evolution seeded at the point at infinity is not supported."""

    code = "INFINITE_INITIAL"


class UndefinedCaseError(Dp2Error):
    """A finite-field pattern was requested outside the covered cases."""

    code = "UNDEFINED_CASE"


class NoPeriodFoundError(Dp2Error):
    """Period detection exhausted the state space without a repeat."""

    code = "NO_PERIOD_FOUND"


class ParseError(Dp2Error):
    """Syntax error in a map expression, with position and expectations."""

    code = "PARSE_ERROR"

    def __init__(self, message, line, column, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(expected))
        detail = f"line {line}, column {column}: {message}"
        if self.expected:
            detail += " (expected " + ", ".join(self.expected) + ")"
        super().__init__(detail)
