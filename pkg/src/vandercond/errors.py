"""Exception types shared across the package."""


class VandercondError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(VandercondError):
    """Invalid precision or other construction-time configuration."""


class DomainError(VandercondError):
    """Argument outside the mathematical domain of the function."""


class PoleError(DomainError):
    """Evaluation exactly at a logarithmic pole (e.g. a node of the potential)."""


class DegeneracyError(VandercondError):
    """Geometrically degenerate input (duplicate nodes, vanishing denominator)."""


class RegimeError(VandercondError):
    """Node family violates the gap condition required by the estimate."""


class ConvergenceError(VandercondError):
    """Iteration failed to converge within its sweep budget."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class UnsupportedMeasureError(VandercondError):
    """Measure variant not supported by the requested operation."""


class PreconditionError(VandercondError):
    """No admissible parameter satisfies the hypotheses of the bound."""
