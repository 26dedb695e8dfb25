"""Analytic geometry of the plane-wave spacetime

    ds^2 = -dt^2 + (1 + f) dx^2 + (1 - f) dy^2 + dz^2,   f = f(t - z).

Index conventions (used everywhere in the package):

* coordinate labels are ordered (t, x, y, z) -> 0..3; local-frame labels 0..3;
* ``christoffel_at(...)[r, m, n]`` is Gamma^r_{mn};
* ``Vierbein.e[a, m]`` is e^a_m (coordinate -> local), ``Vierbein.e_inv[m, a]``
  is e^m_a (the frame vectors themselves);
* ``spin_connection_at(...)[a, m, b]`` is omega^a_{m b}, first index up.

Nothing here differentiates numerically: every quantity is built from f and
df/du, because at realistic amplitudes a finite difference of the metric is
pure rounding noise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .waveform import Waveform, derivative, evaluate

T, X, Y, Z = 0, 1, 2, 3
ETA = np.diag([-1.0, 1.0, 1.0, 1.0])


class Event(NamedTuple):
    t: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @property
    def phase(self) -> float:
        return self.t - self.z


def _event(ev) -> Event:
    ev = ev if isinstance(ev, Event) else Event(*ev)
    if not all(math.isfinite(c) for c in ev):
        raise ValueError(f"event has non-finite components: {ev}")
    return ev


@dataclass(frozen=True)
class Vierbein:
    e: np.ndarray
    e_inv: np.ndarray


class LogDerivs(NamedTuple):
    """f, df/du and the u-derivatives of ln sqrt(1 + f), ln sqrt(1 - f)."""

    f: float
    df: float
    dlp: float
    dlm: float


def log_derivs(w: Waveform, u: float) -> LogDerivs:
    f = evaluate(w, u)
    df = derivative(w, u)
    return LogDerivs(f, df, 0.5 * df / (1.0 + f), -0.5 * df / (1.0 - f))


def metric_at(w: Waveform, ev) -> np.ndarray:
    ev = _event(ev)
    f = evaluate(w, ev.phase)
    return np.diag([-1.0, 1.0 + f, 1.0 - f, 1.0])


def inverse_metric_at(w: Waveform, ev) -> np.ndarray:
    ev = _event(ev)
    f = evaluate(w, ev.phase)
    return np.diag([-1.0, 1.0 / (1.0 + f), 1.0 / (1.0 - f), 1.0])


def christoffel_at(w: Waveform, ev) -> np.ndarray:
    """Gamma^r_{mn}; only the listed plane-wave components are nonzero."""
    ev = _event(ev)
    d = log_derivs(w, ev.phase)
    g = np.zeros((4, 4, 4))
    # d/dt -> +d/du, d/dz -> -d/du
    g[T, X, X] = 0.5 * d.df
    g[T, Y, Y] = -0.5 * d.df
    g[Z, X, X] = 0.5 * d.df
    g[Z, Y, Y] = -0.5 * d.df
    g[X, T, X] = g[X, X, T] = d.dlp
    g[X, X, Z] = g[X, Z, X] = -d.dlp
    g[Y, T, Y] = g[Y, Y, T] = d.dlm
    g[Y, Y, Z] = g[Y, Z, Y] = -d.dlm
    return g


def vierbein_at(w: Waveform, ev) -> Vierbein:
    """Static-observer tetrad: diagonal, e^x_1 = 1/sqrt(1+f), e^y_2 = 1/sqrt(1-f)."""
    ev = _event(ev)
    f = evaluate(w, ev.phase)
    sp, sm = math.sqrt(1.0 + f), math.sqrt(1.0 - f)
    return Vierbein(
        e=np.diag([1.0, sp, sm, 1.0]),
        e_inv=np.diag([1.0, 1.0 / sp, 1.0 / sm, 1.0]),
    )


def spin_connection_at(w: Waveform, ev) -> np.ndarray:
    """omega^a_{m b} = e^a_l nabla_m e^l_b for the static tetrad (eight nonzero entries)."""
    ev = _event(ev)
    d = log_derivs(w, ev.phase)
    sp, sm = math.sqrt(1.0 + d.f), math.sqrt(1.0 - d.f)
    om = np.zeros((4, 4, 4))
    om[0, X, 1] = om[1, X, 0] = sp * d.dlp
    om[1, X, 3] = -sp * d.dlp
    om[3, X, 1] = sp * d.dlp
    om[0, Y, 2] = om[2, Y, 0] = sm * d.dlm
    om[2, Y, 3] = -sm * d.dlm
    om[3, Y, 2] = sm * d.dlm
    return om


def to_local(v: Vierbein, vec) -> np.ndarray:
    """Map a coordinate-basis vector to the local inertial frame: e^a_m vec^m."""
    return v.e @ np.asarray(vec, dtype=float)
