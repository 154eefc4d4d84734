"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PreconditionError(ValueError):
    """A counting hypothesis (e.g. ``h(P) > b_S``) does not hold."""


class AperiodicityError(DomainError):
    """Part set has ``gcd > 1``, so the dominant pole is not unique."""


class PrecisionError(ArithmeticError):
    """The requested enclosure width is not reachable at the working precision."""


class ResourceError(RuntimeError):
    """A configured size cap was exceeded."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
