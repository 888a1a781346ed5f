"""Exception types shared across the package.

Two families matter to callers: validation failures (bad query parameters,
mapped to exit code 2 by the CLI) and numerical non-convergence (exit code 3).
"""


class DetcountError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(DetcountError, ValueError):
    """A query or parameter violates a documented precondition."""


class NotInvertible(ValidationError):
    """Modular inverse requested for a non-unit residue."""


class EvenModulus(ValidationError):
    """Odd modulus required (Jacobi-twisted sums)."""


class CompositeModulus(ValidationError):
    """Prime modulus required."""


class EmptyRange(ValidationError):
    """No integers fall in the open dyadic window (X, 2X)."""


class InvalidR(ValidationError):
    """The shift r is zero or outside the admissible window |r| < 3X^2."""


class OutOfValidatedRange(ValidationError):
    """Special-function argument outside the validated domain."""


class PoleAtNonpositiveInteger(ValidationError):
    """Gamma evaluated at a pole."""


class QuadratureNotConverged(DetcountError, ArithmeticError):
    """Panel refinement exhausted before reaching the requested tolerance."""
