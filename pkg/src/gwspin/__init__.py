"""Spin decoherence of massive spin-1/2 particles in a plane gravitational wave."""

from .errors import ConfigError, DomainError, GwspinError, NumericalError, PositivityError, RangeError, WaveformError
from .waveform import Waveform

__version__ = "0.1.0"
