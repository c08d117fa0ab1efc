"""
exceptions.py
Error hierarchy for the q-deformed Aufbau toolkit.
"""
from typing import Optional


class QAufbauError(Exception):
    """Base class for every error raised by the toolkit."""


class InputValidationError(QAufbauError, ValueError):
    """A caller supplied an argument outside the model's domain."""


class DeformationError(InputValidationError):
    """The deformation parameter q is not a positive finite real."""


class QuantumNumberError(InputValidationError):
    """An orbital quantum number or q-integer argument is out of range."""


class RotorParameterError(InputValidationError):
    """Moment of inertia or ground energy has the wrong sign."""


class BoundsError(InputValidationError):
    """Shell bounds, scan ranges or grid steps are out of range."""


class UnknownSeriesError(InputValidationError):
    """No reference series is registered under the requested name."""


class BracketError(InputValidationError):
    """A root-finding bracket is empty, reversed or non-positive."""


class CapacityExceededError(InputValidationError):
    """More electrons were requested than the orbital universe can hold."""


class EvaluationError(QAufbauError, ArithmeticError):
    """A model quantity could not be evaluated."""


class DegenerateDenominatorError(EvaluationError):
    """h_q + 1 is not positive, so the spectral map is undefined."""


class NonFiniteEvaluationError(EvaluationError):
    """An energy key evaluated to inf or nan."""


class MissingOrbitalError(QAufbauError, LookupError):
    """A sequence lacks an orbital the reference series requires."""


class ReferenceDataError(QAufbauError):
    """
    Malformed reference ground-state data.

    Args:
        message: Human readable description
        line: 1-based line number in the source, when known
    """
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigurationParseError(ReferenceDataError):
    """A configuration string does not follow the `[X] 3d5 4s1` grammar."""


class UnknownCoreError(ReferenceDataError):
    """A bracketed core symbol is not a noble gas."""


class ElectronTotalMismatchError(ReferenceDataError):
    """A record's occupancies do not add up to its atomic number."""
