"""Plane gravitational-wave profiles f(u) as functions of the null phase u = t - z.

Every waveform is a pure function of the single scalar ``u``; callers holding an
event (t, z) compute ``u = t - z`` first.  Partial derivatives of anything built
from f then collapse to ``d/dt = +d/du`` and ``d/dz = -d/du``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import RangeError, WaveformError

#: Waveforms whose peak |f| reaches this value are rejected; keeps 1 +- f > 0.5.
AMPLITUDE_LIMIT = 0.5


class Kind(str, Enum):
    ZERO = "zero"
    GAUSSIAN = "gaussian"
    SINE = "sine"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class Waveform:
    """Dimensionless wave profile.

    Use the ``zero``/``gaussian``/``sine``/``tabulated`` constructors rather than
    the raw initializer.  ``width`` is the Gaussian width (time units) and
    ``frequency`` the angular frequency of the sinusoid (inverse time).
    """

    kind: Kind
    amplitude: float = 0.0
    width: float | None = None
    frequency: float | None = None
    samples: tuple[tuple[float, ...], tuple[float, ...]] | None = None
    _interp: PchipInterpolator | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is Kind.ZERO:
            return
        if kind is Kind.TABULATED:
            self._init_table()
            return
        if not math.isfinite(self.amplitude):
            raise WaveformError("amplitude must be finite")
        if abs(self.amplitude) >= AMPLITUDE_LIMIT:
            raise WaveformError(
                f"amplitude {self.amplitude!r} violates |f| << 1 guard (|A| < {AMPLITUDE_LIMIT})"
            )
        if kind is Kind.GAUSSIAN:
            if self.width is None or not self.width > 0:
                raise WaveformError("gaussian waveform needs width > 0")
        elif kind is Kind.SINE:
            if self.frequency is None or not self.frequency > 0:
                raise WaveformError("sine waveform needs frequency > 0")

    def _init_table(self):
        if self.samples is None:
            raise WaveformError("tabulated waveform needs samples")
        u = np.asarray(self.samples[0], dtype=float)
        f = np.asarray(self.samples[1], dtype=float)
        if u.ndim != 1 or u.shape != f.shape or u.size < 4:
            raise WaveformError("tabulated waveform needs >= 4 matching (u, f) samples")
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(f))):
            raise WaveformError("tabulated samples must be finite")
        if np.any(np.diff(u) <= 0):
            raise WaveformError("tabulated u must be strictly increasing")
        peak = float(np.max(np.abs(f)))
        if peak >= AMPLITUDE_LIMIT:
            raise WaveformError(
                f"tabulated |f| reaches {peak!r}; violates |f| << 1 guard (< {AMPLITUDE_LIMIT})"
            )
        object.__setattr__(self, "amplitude", peak)
        object.__setattr__(self, "_interp", PchipInterpolator(u, f, extrapolate=False))

    # constructors

    @classmethod
    def zero(cls) -> Waveform:
        return cls(Kind.ZERO)

    @classmethod
    def gaussian(cls, amplitude: float, width: float) -> Waveform:
        return cls(Kind.GAUSSIAN, amplitude=float(amplitude), width=float(width))

    @classmethod
    def sine(cls, amplitude: float, frequency: float) -> Waveform:
        return cls(Kind.SINE, amplitude=float(amplitude), frequency=float(frequency))

    @classmethod
    def tabulated(cls, u, f) -> Waveform:
        u = tuple(float(x) for x in u)
        f = tuple(float(x) for x in f)
        return cls(Kind.TABULATED, samples=(u, f))

    @classmethod
    def from_csv(cls, path: str | Path) -> Waveform:
        """Load a two-column ``u,f`` table (header required)."""
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = [h.strip() for h in next(reader, [])]
            if header != ["u", "f"]:
                raise WaveformError(f"{path}: expected header 'u,f', got {','.join(header)!r}")
            rows = [r for r in reader if r and any(c.strip() for c in r)]
        try:
            u = [float(r[0]) for r in rows]
            f = [float(r[1]) for r in rows]
        except (IndexError, ValueError) as exc:
            raise WaveformError(f"{path}: malformed row ({exc})") from None
        return cls.tabulated(u, f)

    # evaluation

    @property
    def u_range(self) -> tuple[float, float]:
        if self.kind is Kind.TABULATED:
            return self.samples[0][0], self.samples[0][-1]
        return -math.inf, math.inf

    def _check_range(self, u):
        lo, hi = self.u_range
        ua = np.asarray(u, dtype=float)
        if np.any(ua < lo) or np.any(ua > hi):
            raise RangeError(f"phase outside tabulated range [{lo}, {hi}]")

    def __call__(self, u):
        return evaluate(self, u)

    def deriv(self, u):
        return derivative(self, u)


def _scalarize(x, like):
    return float(x) if np.ndim(like) == 0 else x


def evaluate(w: Waveform, u):
    """f(u); accepts scalars or arrays."""
    kind = w.kind
    if kind is Kind.ZERO:
        out = np.zeros_like(np.asarray(u, dtype=float))
    elif kind is Kind.GAUSSIAN:
        out = w.amplitude * np.exp(-((np.asarray(u, dtype=float) / w.width) ** 2))
    elif kind is Kind.SINE:
        out = w.amplitude * np.sin(w.frequency * np.asarray(u, dtype=float))
    else:
        w._check_range(u)
        out = w._interp(np.asarray(u, dtype=float))
    return _scalarize(out, u)


def derivative(w: Waveform, u):
    """df/du: analytic where possible, centered difference of the interpolant otherwise."""
    kind = w.kind
    ua = np.asarray(u, dtype=float)
    if kind is Kind.ZERO:
        out = np.zeros_like(ua)
    elif kind is Kind.GAUSSIAN:
        out = -2.0 * ua / w.width**2 * w.amplitude * np.exp(-((ua / w.width) ** 2))
    elif kind is Kind.SINE:
        out = w.amplitude * w.frequency * np.cos(w.frequency * ua)
    else:
        w._check_range(u)
        lo, hi = w.u_range
        grid = np.asarray(w.samples[0])
        h = 0.25 * float(np.min(np.diff(grid)))
        # stencil shifted inward at the table edges
        a = np.clip(ua - h, lo, hi)
        b = np.clip(ua + h, lo, hi)
        out = (w._interp(b) - w._interp(a)) / (b - a)
    return _scalarize(out, u)
