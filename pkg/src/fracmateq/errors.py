"""Exception types raised by the library."""


class FracmateqError(Exception):
    """Base class for all library errors."""


class ValidationError(FracmateqError):
    """Problem data failed validation. Carries the itemized issue list."""

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(self.issues))


class DefinitenessError(FracmateqError):
    """A matrix required to be positive definite is not. Carries lambda_min."""

    def __init__(self, message, lambda_min=None):
        self.lambda_min = lambda_min
        if lambda_min is not None:
            message = f"{message} (lambda_min = {lambda_min:.6e})"
        super().__init__(message)


class ConvergenceError(FracmateqError):
    """An iterative computation failed to converge."""

    def __init__(self, message, iterations=None, residual=None):
        self.iterations = iterations
        self.residual = residual
        super().__init__(message)


class AccuracyError(FracmateqError):
    """A quadrature error estimate exceeded the requested tolerance."""

    def __init__(self, message, estimate=None, requested=None):
        self.estimate = estimate
        self.requested = requested
        super().__init__(message)


class ConsistencyError(FracmateqError):
    """Input does not satisfy a near-solution consistency gate."""

    def __init__(self, message, residual_norm=None):
        self.residual_norm = residual_norm
        super().__init__(message)


class PreconditionError(FracmateqError):
    """An operation precondition is violated."""
