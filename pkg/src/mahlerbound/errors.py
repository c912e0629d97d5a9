"""Exceptions raised by mahlerbound.

Input errors are the caller's fault (bad polynomial, unmet precondition, bad flags).
Numeric errors mean a computation could not be certified within its budget."""

# ==========================================================================================
#                         Base Classes
# ==========================================================================================


class MahlerBoundError(Exception):
    """Base class for every mahlerbound error"""


class InputError(MahlerBoundError):
    """Raised when an input or precondition is invalid"""


class NumericError(MahlerBoundError):
    """Raised when a numeric computation cannot be certified"""


# ==========================================================================================
#                         Input Errors
# ==========================================================================================


class ZeroPolynomialError(InputError):
    """Raised when an operation receives the zero polynomial"""

    def __init__(self, operation: str):
        self.operation = operation
        super().__init__(f"{operation} is undefined for the zero polynomial")


class PreconditionError(InputError):
    """Raised when a documented precondition of an operation does not hold"""

    def __init__(self, operation: str, reason: str):
        self.operation = operation
        self.reason = reason
        super().__init__(f"{operation}: {reason}")


class PolynomialParseError(InputError):
    """Raised when polynomial text is neither in dense nor in sparse form"""

    def __init__(self, text: str, token: str):
        self.text = text
        self.token = token
        super().__init__(f"Cannot parse polynomial {text!r}: bad token {token!r}")


class InvalidParametersError(InputError):
    """Raised when a parameter record violates one of its invariants"""

    def __init__(self, record: str, inequality: str):
        self.record = record
        self.inequality = inequality
        super().__init__(f"Invalid {record}: requires {inequality}")


class NotApplicableError(InputError):
    """Raised when the lower bound theorem does not apply to a polynomial"""

    def __init__(self, polynomial: str, reason: str):
        self.polynomial = polynomial
        self.reason = reason
        super().__init__(f"Theorem not applicable to {polynomial}: {reason}")


class CommandLineError(InputError):
    """Raised when command-line arguments cannot be bound to a command"""

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


# ==========================================================================================
#                         Numeric Errors
# ==========================================================================================


class PrecisionExhaustedError(NumericError):
    """Raised when roots cannot be certified at the maximum working precision"""

    def __init__(self, polynomial: str, max_precision_bits: int):
        self.polynomial = polynomial
        self.max_precision_bits = max_precision_bits
        super().__init__(
            f"Could not certify the roots of {polynomial} within {max_precision_bits} bits"
        )


class GraeffeOverflowError(NumericError):
    """Raised when root squaring produces coefficients beyond the memory budget"""

    def __init__(self, polynomial: str, iteration: int, bits: int, max_bits: int):
        self.polynomial = polynomial
        self.iteration = iteration
        self.bits = bits
        self.max_bits = max_bits
        super().__init__(
            f"Graeffe iteration {iteration} of {polynomial} needs {bits} bits (budget {max_bits})"
        )
