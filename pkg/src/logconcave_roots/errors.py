"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative procedure stops short of its target.

    ``partial`` holds whatever the procedure had computed when it gave up
    (for the root solver, a non-converged ``RootSet``), and ``diagnostics``
    a dict describing the attempt.
    """

    def __init__(self, message, partial=None, diagnostics=None):
        super().__init__(message)
        self.partial = partial
        self.diagnostics = diagnostics or {}
