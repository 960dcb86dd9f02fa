"""
Exception hierarchy for the invariant_info package
"""


class InvariantInfoError(Exception):
    """Base class for every error raised by this package"""


class ValidationError(InvariantInfoError, ValueError):
    """Input failed a documented invariant (shape, Hermiticity, trace, ...)"""


class UnsupportedDimensionError(ValidationError):
    """Requested dimension is outside the supported set"""


class SchemaError(ValidationError):
    """A JSON document does not match the expected schema"""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class NumericError(InvariantInfoError, ArithmeticError):
    """A numerical routine failed (e.g. eigensolver did not converge)"""


class ConsistencyError(NumericError):
    """Computed quantities disagree beyond tolerance with what theory requires"""
