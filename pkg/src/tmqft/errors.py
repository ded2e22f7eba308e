"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain where a quantity is defined."""


class HorizonError(DomainError):
    """Evaluation requested on a horizon, zeta_+ = 0 or zeta_- = 0."""


class DegenerateProfileError(ValueError):
    """A metric profile produced a non-finite lapse or violates its invariants."""


class SingularStateError(ValueError):
    """The zero-mode state gamma = 0 is not a normalizable state."""


class ConvergenceError(RuntimeError):
    """A quadrature, ODE solve or series failed to reach its tolerance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
