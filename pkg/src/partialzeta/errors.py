"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: validation problems exit 1, exhausted
caps or precision exit 2, and mathematical-consistency failures exit 3.
"""


class PartialZetaError(Exception):
    exit_code = 1


class ValidationError(PartialZetaError, ValueError):
    exit_code = 1


class ParseError(ValidationError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
            if text is not None:
                message += f"\n  {text}\n  {' ' * position}^"
        super().__init__(message)


class SizeError(PartialZetaError):
    """An enumeration would exceed the configured field-size or work cap."""

    exit_code = 2


class PrecisionError(PartialZetaError):
    """A p-adic valuation is not determined at the working precision."""

    exit_code = 2


class DegreeCapError(PartialZetaError):
    """No linear recurrence of order within the degree cap fits the data."""

    exit_code = 2


class InconsistencyError(PartialZetaError):
    """A guard term, theorem check, or identity failed."""

    exit_code = 3


class ConjectureViolation(InconsistencyError):
    """A cyclotomic exponent sum that should be an integer is not."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)
