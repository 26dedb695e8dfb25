"""Independent reference computations used by the validation report and the tests.

Each oracle reaches its answer by a different route from the production code
(finite differences at extended precision, direct quadrature in proper time, explicit averages of
unitary conjugations) so that agreement is evidence rather than tautology.
"""
from __future__ import annotations

import math

import mpmath
import numpy as np

from .kinematics import FrameParams, trajectory, wigner_generator, wigner_matrix
from .quantum import basis_op
from .wavepacket import DecoherenceFactor
from .waveform import Kind, Waveform


MP_DPS = 40


def _mp_profile(w: Waveform):
    """f(u) rebuilt from the waveform parameters at extended precision."""
    if w.kind is Kind.ZERO:
        return lambda u: mpmath.mpf(0)
    if w.kind is Kind.GAUSSIAN:
        a, s = mpmath.mpf(w.amplitude), mpmath.mpf(w.width)
        return lambda u: a * mpmath.exp(-((u / s) ** 2))
    if w.kind is Kind.SINE:
        a, k = mpmath.mpf(w.amplitude), mpmath.mpf(w.frequency)
        return lambda u: a * mpmath.sin(k * u)
    raise ValueError("extended-precision oracle needs an analytic waveform")


def _mp_fields(w: Waveform, ev, h):
    """Metric, inverse frame and their central differences along each coordinate."""
    prof = _mp_profile(w)
    x = [mpmath.mpf(float(c)) for c in ev]

    def metric(c):
        f = prof(c[0] - c[3])
        return [-1, 1 + f, 1 - f, 1]

    def frame_inv(c):
        f = prof(c[0] - c[3])
        return [mpmath.mpf(1), 1 / mpmath.sqrt(1 + f), 1 / mpmath.sqrt(1 - f), mpmath.mpf(1)]

    def diff(fn):
        out = []
        for s in range(4):
            up, dn = list(x), list(x)
            up[s] += h
            dn[s] -= h
            out.append([(a - b) / (2 * h) for a, b in zip(fn(up), fn(dn))])
        return out  # [s][diagonal index]

    return metric(x), frame_inv(x), diff(metric), diff(frame_inv)


def _mp_christoffel(g, dg):
    """Gamma^r_{mn} = 1/2 g^{rr} (d_m g_{rn} + d_n g_{rm} - d_r g_{mn}) for a diagonal metric."""
    gam = [[[mpmath.mpf(0)] * 4 for _ in range(4)] for _ in range(4)]
    for r in range(4):
        for m in range(4):
            for n in range(4):
                acc = mpmath.mpf(0)
                if r == n:
                    acc += dg[m][r]
                if r == m:
                    acc += dg[n][r]
                if m == n:
                    acc -= dg[r][m]
                gam[r][m][n] = acc / (2 * g[r])
    return gam


def fd_christoffel(w: Waveform, ev, h: float = 1e-12) -> np.ndarray:
    """Christoffel symbols from a metric differenced at 40 significant digits."""
    with mpmath.workdps(MP_DPS):
        g, _, dg, _ = _mp_fields(w, ev, mpmath.mpf(h))
        return np.array(_mp_christoffel(g, dg), dtype=float)


def fd_spin_connection(w: Waveform, ev, h: float = 1e-12) -> np.ndarray:
    """omega^a_{m b} = e^a_l (d_m e^l_b + Gamma^l_{m n} e^n_b), everything at 40 digits."""
    with mpmath.workdps(MP_DPS):
        g, einv, dg, deinv = _mp_fields(w, ev, mpmath.mpf(h))
        gam = _mp_christoffel(g, dg)
        om = np.zeros((4, 4, 4))
        for a in range(4):
            for m in range(4):
                for b in range(4):
                    # diagonal frame: e^a_l nonzero only for l == a, e^n_b only for n == b
                    cov = (deinv[m][a] if a == b else 0) + gam[a][m][b] * einv[b]
                    om[a, m, b] = float(cov / einv[a])
        return om


def simpson(fn, a: float, b: float, panels: int = 200) -> float:
    """Composite Simpson rule; ``panels`` must be even."""
    if panels % 2:
        raise ValueError("Simpson needs an even number of panels")
    xs = np.linspace(a, b, panels + 1)
    ys = np.array([fn(x) for x in xs])
    h = (b - a) / panels
    return h / 3 * (ys[0] + ys[-1] + 4 * ys[1:-1:2].sum() + 2 * ys[2:-1:2].sum())


def simpson_omega(w: Waveform, fp: FrameParams, tau_i: float, tau_f: float, k, panels: int = 200) -> float:
    """Integrate phi^1_3 along the actual worldline events."""
    return simpson(lambda tau: wigner_generator(w, fp, trajectory(w, fp, tau), k)[1, 3], tau_i, tau_f, panels)


def rotation_average(angles, weights, j: int, k: int) -> np.ndarray:
    """sum_n w_n U(Omega_n) R^{jk} U(Omega_n)^dagger."""
    r = basis_op(j, k)
    out = np.zeros((2, 2), dtype=complex)
    for om, wt in zip(angles, weights):
        u = wigner_matrix(om)
        out += wt * (u @ r @ u.conj().T)
    return out


def two_point_angles(u: DecoherenceFactor) -> tuple[list[float], list[float]]:
    """An equal-weight pair of angles whose mean of exp(i Omega) is exactly u_bar.

    exp(i a) cos b with a = arg u_bar and cos b = |u_bar|.
    """
    a = math.atan2(u.s_bar, u.c_bar)
    b = math.acos(min(1.0, math.hypot(u.c_bar, u.s_bar)))
    return [a + b, a - b], [0.5, 0.5]


def unitary_average_apply(op: np.ndarray, angles, weights, target: int, n: int) -> np.ndarray:
    """Average of (U on ``target``) op (U on ``target``)^dagger over the angle distribution."""
    out = np.zeros_like(op, dtype=complex)
    for om, wt in zip(angles, weights):
        mats = [np.eye(2, dtype=complex)] * n
        mats[target] = wigner_matrix(om)
        full = mats[0]
        for m in mats[1:]:
            full = np.kron(full, m)
        out += wt * (full @ op @ full.conj().T)
    return out
