"""Exception types shared across the package."""


class PoleAtRootOfUnity(ArithmeticError):
    """A rational function in A has a pole at the chosen root of unity."""


class ShapeMismatch(ValueError):
    """Source/target objects of two morphisms do not fit together."""


class RingMismatch(TypeError):
    """Two values live over different coefficient rings."""


class IndexOutOfRange(ValueError):
    """An index lies outside the range where the object is defined."""


class SolverFailure(RuntimeError):
    """An exact linear solve that should succeed did not."""


class BudgetExceeded(RuntimeError):
    """A computation would exceed the configured size budget."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ParseError(ValueError):
    """Malformed text input; ``position`` is a 0-based character offset."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
