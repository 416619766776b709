"""Exception hierarchy shared across the package."""


class CartanLabError(Exception):
    """Base class for all library errors."""


class DomainMismatchError(CartanLabError, TypeError):
    """Operands live in different coefficient domains, or the field does not match."""


class ScalarParseError(CartanLabError, ValueError):
    def __init__(self, message, text="", position=0):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class CoefficientRangeError(ScalarParseError):
    """A Laurent coefficient lies outside 0 <= c < p."""


class NotInvertibleError(CartanLabError, ZeroDivisionError):
    """Division by zero, or by a Laurent polynomial that is not a monomial."""


class DimensionMismatchError(CartanLabError, ValueError):
    pass


class DeterminantError(CartanLabError, ValueError):
    """Matrix does not have determinant one."""


class ConvergenceError(CartanLabError, ArithmeticError):
    """An iterative numerical routine exhausted its budget."""


class EntrySizeError(CartanLabError, ArithmeticError):
    """Exact matrix entries outgrew the configured bit-size cap."""


class GroupSpecError(CartanLabError, ValueError):
    """Malformed JSON group specification."""


class ElementCapError(CartanLabError):
    """Ball enumeration hit the element cap; carries the partial result."""

    def __init__(self, partial, completed_radius, cap):
        super().__init__(
            f"element cap {cap} exceeded; radius {completed_radius} was the last complete layer"
        )
        self.partial = partial
        self.completed_radius = completed_radius
        self.cap = cap
