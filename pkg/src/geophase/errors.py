"""Exception types shared across the package."""


class GeophaseError(Exception):
    """Base class for all package-specific errors."""


class DomainError(GeophaseError, ValueError):
    """An argument is outside the domain an operation is defined on."""


class QuadratureError(GeophaseError, ArithmeticError):
    """A quadrature did not reach the requested accuracy.

    Carries the observed residual so callers can report it.
    """

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class UnwrapError(GeophaseError, ValueError):
    """A phase curve could not be unwrapped unambiguously."""


class AntipodalError(GeophaseError, ValueError):
    """A geodesic between (numerically) antipodal points is undefined."""

    def __init__(self, message: str, theta: float | None = None,
                 segment: int | None = None):
        if theta is not None:
            message = f"{message} (theta={theta:.6g}, segment={segment})"
        super().__init__(message)
        self.theta = theta
        self.segment = segment


class TransitionNotFoundError(GeophaseError, RuntimeError):
    """No topological-index flip was found in the searched strength range."""


class AnalysisError(GeophaseError, ArithmeticError):
    """A derived integer quantity failed its residual check."""
