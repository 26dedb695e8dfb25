"""Forced worldline, local Lorentz/Wigner generators and the accumulated Wigner angle.

The particle follows the non-geodesic worldline with constant local rapidity
``xi`` at polar angle ``theta`` in the (x, z) plane.  Along it the local frame
momentum is fixed, so the infinitesimal Wigner rotation phi^1_3 = -G H(k) is a
total derivative and the finite angle reduces to

    Omega(k) = H(k) * [ln sqrt(1 + f(u_f)) - ln sqrt(1 + f(u_i))].

The proper-time origin tau = 0 is the configured initial event.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .errors import DomainError, NumericalError
from .geometry import ETA, Event, X, Z, log_derivs, spin_connection_at, vierbein_at
from .waveform import Waveform, evaluate

#: Below this |f| the log difference is formed from (f_f - f_i) directly.
SMALL_F = 1e-8


@dataclass(frozen=True)
class FrameParams:
    """Particle mass, rapidity, polar angle and initial event.

    ``allow_boundary`` admits the degenerate null-test configurations
    theta in {0, pi/2} and xi = 0.
    """

    mass: float = 1.0
    rapidity: float = 1.0
    angle: float = math.pi / 4
    t_i: float = 0.0
    z_i: float = 0.0
    x_i: float = 0.0
    y_i: float = 0.0
    allow_boundary: bool = False

    def __post_init__(self):
        for name in ("mass", "rapidity", "angle", "t_i", "z_i", "x_i", "y_i"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if not self.mass > 0:
            raise DomainError(f"mass must be > 0, got {self.mass!r}")
        if self.rapidity < 0:
            raise DomainError(f"rapidity must be >= 0, got {self.rapidity!r}")
        if self.allow_boundary:
            if not 0.0 <= self.angle <= math.pi / 2:
                raise DomainError(f"angle must lie in [0, pi/2], got {self.angle!r}")
        else:
            if not 0.0 < self.angle < math.pi / 2:
                raise DomainError(
                    f"angle must satisfy 0 < angle < pi/2 (got {self.angle!r}); "
                    "set allow_boundary for null tests"
                )
            if self.rapidity == 0.0:
                raise DomainError("rapidity 0 is a boundary case; set allow_boundary")

    @property
    def initial_event(self) -> Event:
        return Event(self.t_i, self.x_i, self.y_i, self.z_i)

    @property
    def phase_rate(self) -> float:
        """du/dtau = cosh(xi) - sinh(xi) cos(theta)."""
        return math.cosh(self.rapidity) - math.sinh(self.rapidity) * math.cos(self.angle)

    def center_momentum(self) -> LocalMomentum:
        """Spatial part of q^a = m (cosh xi, sinh xi sin theta, 0, sinh xi cos theta)."""
        sh = math.sinh(self.rapidity)
        return LocalMomentum(
            self.mass * sh * math.sin(self.angle), 0.0, self.mass * sh * math.cos(self.angle)
        )


class LocalMomentum(NamedTuple):
    """Local-frame spatial momentum; the energy k^0 = sqrt(k.k + m^2) is implied."""

    k1: float
    k2: float
    k3: float

    def energy(self, mass: float) -> float:
        return math.sqrt(self.k1**2 + self.k2**2 + self.k3**2 + mass**2)


def _momentum(k, mass: float) -> LocalMomentum:
    """Accept a 3-vector, or a 4-vector whose energy component is checked on-shell."""
    k = tuple(float(c) for c in k)
    if len(k) == 4:
        spatial = LocalMomentum(*k[1:])
        e = spatial.energy(mass)
        if abs(k[0] - e) > 1e-12 * e:
            raise DomainError(f"momentum off shell: k0={k[0]!r}, sqrt(k.k+m^2)={e!r}")
        return spatial
    if len(k) != 3:
        raise DomainError("momentum needs 3 (spatial) or 4 components")
    if not all(math.isfinite(c) for c in k):
        raise DomainError("momentum must be finite")
    return LocalMomentum(*k)


class Method(str, Enum):
    EXACT_LOG = "exact_log"
    FIRST_ORDER = "first_order"


class WignerAngle(NamedTuple):
    value: float
    method: Method


def four_velocity(w: Waveform, fp: FrameParams, ev) -> np.ndarray:
    ev = Event(*ev)
    f = evaluate(w, ev.phase)
    ch, sh = math.cosh(fp.rapidity), math.sinh(fp.rapidity)
    return np.array(
        [ch, sh * math.sin(fp.angle) / math.sqrt(1.0 + f), 0.0, sh * math.cos(fp.angle)]
    )


def phase_at(fp: FrameParams, tau):
    """u(tau) = (t_i - z_i) + tau (cosh xi - sinh xi cos theta); exact and linear."""
    return (fp.t_i - fp.z_i) + np.asarray(tau, dtype=float) * fp.phase_rate


def trajectory(w: Waveform, fp: FrameParams, tau: float) -> Event:
    """Event reached after proper time ``tau`` along the forced worldline."""
    if tau < 0:
        raise DomainError(f"proper time must be >= 0, got {tau!r}")
    ch, sh = math.cosh(fp.rapidity), math.sinh(fp.rapidity)
    t = fp.t_i + tau * ch
    z = fp.z_i + tau * sh * math.cos(fp.angle)
    vx = sh * math.sin(fp.angle)
    if tau == 0.0 or vx == 0.0:
        return Event(t, fp.x_i + tau * vx, fp.y_i, z)

    def integrand(s):
        return vx / math.sqrt(1.0 + evaluate(w, float(phase_at(fp, s))))

    val, abserr, info, *msg = integrate.quad(
        integrand, 0.0, tau, epsabs=1e-13, epsrel=1e-12, limit=200, full_output=1
    )
    if msg:
        raise NumericalError(
            f"x(tau) quadrature did not converge at tau={tau!r}: {msg[0]} "
            f"(estimate={val!r}, abserr={abserr!r}, neval={info['neval']})"
        )
    return Event(t, fp.x_i + val, fp.y_i, z)


def big_F(w: Waveform, fp: FrameParams, ev) -> float:
    """F = d/dtau ln sqrt(1 + f) along the worldline."""
    d = log_derivs(w, Event(*ev).phase)
    return fp.phase_rate * d.dlp


def big_G(w: Waveform, fp: FrameParams, ev) -> float:
    """G = (sinh xi cos theta d/dt + cosh xi d/dz) ln sqrt(1 + f); identically -F."""
    d = log_derivs(w, Event(*ev).phase)
    return (math.sinh(fp.rapidity) * math.cos(fp.angle) - math.cosh(fp.rapidity)) * d.dlp


def acceleration(w: Waveform, fp: FrameParams, ev) -> tuple[np.ndarray, np.ndarray]:
    """Coordinate and local-frame components of the forcing acceleration."""
    ev = Event(*ev)
    d = log_derivs(w, ev.phase)
    sh = math.sinh(fp.rapidity)
    s = math.sin(fp.angle)
    F = fp.phase_rate * d.dlp
    ax = sh * sh * s * s * d.dlp  # d_t ln sqrt(1+f); the z slot carries -d_z = +d_u
    coord = np.array([ax, F * sh * s / math.sqrt(1.0 + d.f), 0.0, ax])
    local = vierbein_at(w, ev).e @ coord
    return coord, local


def lorentz_generator(w: Waveform, fp: FrameParams, ev) -> np.ndarray:
    """lambda^a_b in closed form."""
    G = big_G(w, fp, ev)
    ch, sh = math.cosh(fp.rapidity), math.sinh(fp.rapidity)
    s, c = math.sin(fp.angle), math.cos(fp.angle)
    lam = np.zeros((4, 4))
    lam[0, 1] = lam[1, 0] = sh * sh * c * s * G
    lam[0, 3] = lam[3, 0] = -sh * sh * s * s * G
    lam[1, 3] = -ch * sh * s * G
    lam[3, 1] = -lam[1, 3]
    return lam


def lorentz_generator_definitional(w: Waveform, fp: FrameParams, ev) -> np.ndarray:
    """lambda^a_b = -(a^a q_b - q^a a_b)/m + chi^a_b with chi^a_b = -u^m omega^a_{m b}.

    Independent of :func:`lorentz_generator`; used to cross-check it.
    """
    ev = Event(*ev)
    m = fp.mass
    u = four_velocity(w, fp, ev)
    q = vierbein_at(w, ev).e @ (m * u)
    _, a = acceleration(w, fp, ev)
    q_low, a_low = ETA @ q, ETA @ a
    chi = -np.einsum("m,amb->ab", u, spin_connection_at(w, ev))
    return -(np.outer(a, q_low) - np.outer(q, a_low)) / m + chi


def big_H(fp: FrameParams, k1, k3, k2=0.0):
    """Momentum factor of the Wigner angle; vectorized over k1, k3 (and k2)."""
    m = fp.mass
    s, c = math.sin(fp.angle), math.cos(fp.angle)
    ch, sh, th = math.cosh(fp.rapidity), math.sinh(fp.rapidity), math.tanh(fp.rapidity)
    k1 = np.asarray(k1, dtype=float)
    k3 = np.asarray(k3, dtype=float)
    k0 = np.sqrt(k1 * k1 + np.asarray(k2, dtype=float) ** 2 + k3 * k3 + m * m)
    out = (1.0 - (k1 * s + k3 * c) / (k0 + m) * th) * ch * sh * s
    return float(out) if out.ndim == 0 else out


def big_H_at(fp: FrameParams, k) -> float:
    k = _momentum(k, fp.mass)
    return big_H(fp, k.k1, k.k3, k.k2)


def wigner_generator(w: Waveform, fp: FrameParams, ev, k) -> np.ndarray:
    """phi^a_b from the general boost-corrected formula applied to lambda."""
    k = _momentum(k, fp.mass)
    lam = lorentz_generator(w, fp, ev)
    kv = np.array([k.k1, k.k2, k.k3])
    denom = k.energy(fp.mass) + fp.mass
    phi = np.zeros((4, 4))
    # spatial indices: k_j = k^j and lambda_{j0} = lambda^j_0 (eta_jj = +1)
    for i in range(1, 4):
        for j in range(1, 4):
            phi[i, j] = lam[i, j] + (lam[i, 0] * kv[j - 1] - kv[i - 1] * lam[j, 0]) / denom
    return phi


def log_ratio(f_i: float, f_f: float) -> float:
    """ln sqrt(1 + f_f) - ln sqrt(1 + f_i) without losing the small difference."""
    if max(abs(f_i), abs(f_f)) < SMALL_F:
        return 0.5 * math.log1p((f_f - f_i) / (1.0 + f_i))
    return 0.5 * (math.log1p(f_f) - math.log1p(f_i))


def omega_factor(w: Waveform, fp: FrameParams, tau_i: float, tau_f: float, method=Method.EXACT_LOG) -> float:
    """The k-independent part of Omega, so that Omega(k) = H(k) * omega_factor."""
    method = Method(method)
    if not 0.0 <= tau_i <= tau_f:
        raise DomainError(f"need 0 <= tau_i <= tau_f, got ({tau_i!r}, {tau_f!r})")
    f_i = evaluate(w, float(phase_at(fp, tau_i)))
    f_f = evaluate(w, float(phase_at(fp, tau_f)))
    if method is Method.EXACT_LOG:
        return log_ratio(f_i, f_f)
    return 0.5 * (f_f - f_i)


def omega(w: Waveform, fp: FrameParams, tau_i: float, tau_f: float, k, method=Method.EXACT_LOG) -> WignerAngle:
    method = Method(method)
    return WignerAngle(big_H_at(fp, k) * omega_factor(w, fp, tau_i, tau_f, method), method)


def wigner_matrix(angle) -> np.ndarray:
    """exp(-i sigma_y Omega / 2): a real rotation [[c, -s], [s, c]] of half angle."""
    angle = angle.value if isinstance(angle, WignerAngle) else float(angle)
    c, s = math.cos(0.5 * angle), math.sin(0.5 * angle)
    return np.array([[c, -s], [s, c]], dtype=complex)
