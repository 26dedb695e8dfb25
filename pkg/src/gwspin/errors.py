"""Exception hierarchy shared across the package."""


class GwspinError(Exception):
    """Base class for all package errors."""


class WaveformError(GwspinError, ValueError):
    """Invalid waveform configuration (amplitude guard, bad table...)."""


class RangeError(GwspinError, ValueError):
    """Phase outside the sampled range of a tabulated waveform."""


class DomainError(GwspinError, ValueError):
    """Argument outside the domain of an operation (off-shell momentum, bad frame)."""


class PositivityError(GwspinError, ArithmeticError):
    """Density operator has a significantly negative eigenvalue."""


class NumericalError(GwspinError, ArithmeticError):
    """A numerical procedure failed to converge or produced a degenerate result."""


class ConfigError(GwspinError, ValueError):
    """Scenario configuration rejected during validation."""
