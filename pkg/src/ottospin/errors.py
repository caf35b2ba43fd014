"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain an operation is defined on."""


class InfiniteTemperatureError(DomainError):
    """Population exactly 0 or 1 maps to an infinite inverse-temperature magnitude."""


class DegeneracyError(DomainError):
    """Hamiltonian is too close to degenerate for a stable eigenbasis."""


class AccuracyError(RuntimeError):
    """Numerical integration failed to meet its accuracy contract."""

    def __init__(self, message: str, drift: float | None = None):
        super().__init__(message)
        self.drift = drift


class RegimeError(ValueError):
    """A thermodynamic quantity was requested outside the regime where it is defined."""
