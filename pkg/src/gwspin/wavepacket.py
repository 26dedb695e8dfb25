"""Gaussian momentum wave packet and the decoherence factor u_bar = <exp(i Omega)>.

The packet lives on the k^2 = 0 plane; the Lorentz-invariant measure factor
N(k) cancels against the 1/sqrt(N) in the amplitude, so the averaging weight is
a plain bivariate Gaussian

    w(k) = exp(-((k1 - q1)^2 + (k3 - q3)^2) / w^2) / (pi w^2).

All decoherence quantities are kept in *deficit* form.  At realistic wave
amplitudes 1 - |u_bar| is ~1e-42: representable as a double, while |u_bar|
itself rounds to exactly 1.0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .kinematics import FrameParams, LocalMomentum, Method, big_H, omega_factor
from .waveform import Waveform

DEFAULT_ORDER = 40
MAX_ORDER = 200
DEFAULT_SEED = 0x5EED


@dataclass(frozen=True)
class WavePacket:
    width: float
    center: LocalMomentum
    mass: float

    def __post_init__(self):
        if not (math.isfinite(self.width) and self.width > 0):
            raise DomainError(f"packet width must be > 0, got {self.width!r}")
        if self.center.k2 != 0.0:
            raise DomainError("packet center must lie on the k2 = 0 plane")

    @classmethod
    def for_frame(cls, fp: FrameParams, width: float) -> WavePacket:
        return cls(width, fp.center_momentum(), fp.mass)


def weight(p: WavePacket, k) -> float:
    """Normalized packet density at local momentum k (k2 must vanish)."""
    k = LocalMomentum(*k)
    if k.k2 != 0.0:
        raise DomainError("packet weight is defined on the k2 = 0 plane only")
    r2 = (k.k1 - p.center.k1) ** 2 + (k.k3 - p.center.k3) ** 2
    return math.exp(-r2 / p.width**2) / (math.pi * p.width**2)


@dataclass(frozen=True)
class DecoherenceFactor:
    """u_bar held as deficits.

    ``deficit`` is 1 - |u_bar|, ``phase`` is arg u_bar, ``real_deficit`` is
    1 - Re u_bar and ``imag`` is Im u_bar.  ``sq_deficit`` (1 - |u_bar|^2) is
    the quantity the two-particle results depend on.
    """

    deficit: float
    phase: float
    real_deficit: float
    imag: float

    def __post_init__(self):
        if not (0.0 <= self.deficit <= 1.0):
            raise DomainError(f"deficit must lie in [0, 1], got {self.deficit!r}")

    @classmethod
    def identity(cls) -> DecoherenceFactor:
        return cls(0.0, 0.0, 0.0, 0.0)

    @classmethod
    def from_complex(cls, u: complex) -> DecoherenceFactor:
        """Build from a complex value; only meaningful when 1 - |u| is well above 1e-16."""
        u = complex(u)
        mag = abs(u)
        if mag > 1.0 + 1e-12:
            raise DomainError(f"|u_bar| must not exceed 1, got {mag!r}")
        return cls(max(0.0, 1.0 - mag), math.atan2(u.imag, u.real), 1.0 - u.real, u.imag)

    @property
    def magnitude(self) -> float:
        return 1.0 - self.deficit

    @property
    def c_bar(self) -> float:
        return 1.0 - self.real_deficit

    @property
    def s_bar(self) -> float:
        return self.imag

    @property
    def value(self) -> complex:
        return complex(self.c_bar, self.s_bar)

    @property
    def sq_deficit(self) -> float:
        return deficit_pow(self.deficit, 2)


def deficit_pow(d, n: int) -> float:
    """1 - (1 - delta)^n, accurate for delta down to the subnormal range."""
    delta = d.deficit if isinstance(d, DecoherenceFactor) else float(d)
    if n < 1:
        raise DomainError(f"power must be >= 1, got {n!r}")
    if delta == 0.0:
        return 0.0
    if delta >= 1.0:
        return 1.0
    return -math.expm1(float(n) * math.log1p(-delta))


def deficit_sq(d) -> float:
    return deficit_pow(d, 2)


def deficit_combine(da: float, db: float) -> float:
    """Deficit of a product of two magnitudes: 1 - (1 - da)(1 - db)."""
    return da + db - da * db


def _factor_from_samples(H: np.ndarray, wts: np.ndarray, scale: float, sum_fn) -> DecoherenceFactor:
    """Reduce per-node H values with weights into a DecoherenceFactor.

    Omega = H * scale.  |u_bar| is computed about the mean angle so that the
    deficit never comes from subtracting two numbers close to 1.
    """
    om = H * scale
    real_def = float(sum_fn(wts * 2.0 * np.sin(0.5 * om) ** 2))
    imag = float(sum_fn(wts * np.sin(om)))
    h_mean = float(sum_fn(wts * H))
    dom = (H - h_mean) * scale
    d_c = float(sum_fn(wts * 2.0 * np.sin(0.5 * dom) ** 2))
    s_c = float(sum_fn(wts * np.sin(dom)))
    e = 2.0 * d_c - d_c * d_c - s_c * s_c  # 1 - |u_bar|^2
    e = min(max(e, 0.0), 1.0)
    delta = e / (1.0 + math.sqrt(1.0 - e))
    phase = h_mean * scale + math.atan2(s_c, 1.0 - d_c)
    return DecoherenceFactor(delta, phase, real_def, imag)


def _check_order(order: int) -> None:
    if not (isinstance(order, (int, np.integer)) and 8 <= order <= MAX_ORDER):
        raise DomainError(f"quadrature order must be an integer in [8, {MAX_ORDER}], got {order!r}")


def quadrature_nodes(p: WavePacket, order: int = DEFAULT_ORDER):
    """Tensor-product Gauss-Hermite nodes (k1, k3) and normalized weights.

    k = q + w t maps the packet density onto the exp(-t^2) Hermite weight.
    """
    _check_order(order)
    t, wt = np.polynomial.hermite.hermgauss(order)
    t1, t3 = np.meshgrid(t, t, indexing="ij")
    k1 = p.center.k1 + p.width * t1
    k3 = p.center.k3 + p.width * t3
    wts = np.outer(wt, wt)
    wts = wts / wts.sum()
    return k1.ravel(), k3.ravel(), wts.ravel()


def ubar(
    p: WavePacket,
    w: Waveform,
    fp: FrameParams,
    tau_i: float,
    tau_f: float,
    order: int = DEFAULT_ORDER,
    method=Method.EXACT_LOG,
) -> DecoherenceFactor:
    """Packet average of exp(i Omega(k)) by Gauss-Hermite quadrature."""
    k1, k3, wts = quadrature_nodes(p, order)
    scale = omega_factor(w, fp, tau_i, tau_f, method)
    if scale == 0.0:
        return DecoherenceFactor.identity()
    return _factor_from_samples(big_H(fp, k1, k3), wts, scale, math.fsum)


class MonteCarloEstimate(NamedTuple):
    factor: DecoherenceFactor
    stderr_real_deficit: float
    stderr_imag: float
    mean_omega: float
    stderr_omega: float


def sample_momenta(p: WavePacket, n_samples: int, seed: int = DEFAULT_SEED):
    """Draw (k1, k3) from the packet density with a Philox counter-based generator."""
    rng = np.random.Generator(np.random.Philox(seed))
    z = rng.standard_normal((n_samples, 2))
    sd = p.width / math.sqrt(2.0)
    return p.center.k1 + sd * z[:, 0], p.center.k3 + sd * z[:, 1]


def ubar_mc(
    p: WavePacket,
    w: Waveform,
    fp: FrameParams,
    tau_i: float,
    tau_f: float,
    n_samples: int = 1_000_000,
    seed: int = DEFAULT_SEED,
    method=Method.EXACT_LOG,
) -> MonteCarloEstimate:
    """Monte Carlo estimate of u_bar with standard errors of both accumulators.

    Samples are drawn in one block in index order, so the result is
    bit-identical for a given seed regardless of how the caller is threaded.
    """
    if n_samples < 1000:
        raise DomainError(f"need at least 1000 samples, got {n_samples!r}")
    k1, k3 = sample_momenta(p, n_samples, seed)
    scale = omega_factor(w, fp, tau_i, tau_f, method)
    H = big_H(fp, k1, k3)
    om = H * scale
    wts = np.full(n_samples, 1.0 / n_samples)
    factor = _factor_from_samples(H, wts, scale, np.sum)
    root_n = math.sqrt(n_samples)
    return MonteCarloEstimate(
        factor,
        float(np.std(2.0 * np.sin(0.5 * om) ** 2, ddof=1)) / root_n,
        float(np.std(np.sin(om), ddof=1)) / root_n,
        float(np.mean(om)),
        float(np.std(om, ddof=1)) / root_n,
    )
