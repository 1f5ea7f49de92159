"""
Engine exceptions

Every fault raised by the engine derives from BasymError, which is a Django
ValidationError so embedding projects and the management commands can treat
engine input problems like any other validation failure.
"""
from __future__ import annotations

from typing import Optional, Sequence

from django.core.exceptions import ValidationError


class BasymError(ValidationError):
    """Base class for all engine errors"""

    default_code = "basym"

    def __init__(self, message: str, code: Optional[str] = None, params=None):
        super().__init__(message, code=code or self.default_code, params=params)

    def __str__(self) -> str:
        return "; ".join(self.messages)


class DegreeGroupMismatch(BasymError):
    default_code = "degree_group_mismatch"


class AmbientMismatch(BasymError):
    default_code = "ambient_mismatch"


class UndefinedDegree(BasymError):
    default_code = "undefined_degree"


class InhomogeneousElement(BasymError):
    """Raised when the terms of an element disagree on their degree"""

    default_code = "inhomogeneous"

    def __init__(self, message: str, witnesses: Sequence[str] = ()):
        super().__init__(message)
        self.witnesses = tuple(witnesses)


class PositivityError(BasymError):
    default_code = "positivity"


class ExponentOverflow(BasymError):
    default_code = "exponent_overflow"


class ResolutionLengthExceeded(BasymError):
    default_code = "resolution_length"


class NotEquigenerated(BasymError):
    default_code = "not_equigenerated"


class NegativePower(BasymError):
    default_code = "negative_power"


class FitError(BasymError):
    default_code = "fit"


class SessionSyntaxError(BasymError):
    """Parse failure with a line/column position"""

    default_code = "syntax"

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
