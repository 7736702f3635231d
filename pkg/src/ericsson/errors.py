"""Exception hierarchy shared by all computational routes."""


class EricssonError(Exception):
    """Base class for every error raised by this package."""


class DomainError(EricssonError, ValueError):
    """A parameter lies outside its admissible range.

    ``field`` names the offending input so callers (and the CLI) can report it.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class PoleError(EricssonError, ValueError):
    """Gamma-family function evaluated at a non-positive integer."""


class ConvergenceError(EricssonError, ArithmeticError):
    """An iterative or series method failed to reach its tolerance."""


class ConsistencyError(EricssonError, ArithmeticError):
    """A thermodynamic identity or reality condition was violated."""


class StabilityError(EricssonError, ArithmeticError):
    """The linear dynamics has a growing mode."""


class StepSizeError(EricssonError, ValueError):
    """Time step too coarse for the fastest dynamical scale."""
