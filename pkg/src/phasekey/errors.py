class DomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class NumericalError(ArithmeticError):
    """A numerical procedure failed to reach its accuracy target."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
