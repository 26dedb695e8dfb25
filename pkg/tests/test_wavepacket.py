import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from gwspin.errors import DomainError
from gwspin.kinematics import FrameParams, Method, big_H, omega_factor
from gwspin.wavepacket import (
    DecoherenceFactor,
    WavePacket,
    deficit_combine,
    deficit_pow,
    quadrature_nodes,
    sample_momenta,
    ubar,
    ubar_mc,
    weight,
)
from gwspin.waveform import Waveform

FP = FrameParams(1.0, 1.0, math.pi / 4, t_i=-4.0)
PACKET = WavePacket.for_frame(FP, 0.5)


def test_weight_normalized():
    c = PACKET.center
    total, _ = integrate.dblquad(
        lambda k3, k1: weight(PACKET, (k1, 0.0, k3)), c.k1 - 6, c.k1 + 6, c.k3 - 6, c.k3 + 6, epsabs=1e-13
    )
    assert total == pytest.approx(1.0, abs=1e-10)


def test_weight_off_plane_rejected():
    with pytest.raises(DomainError):
        weight(PACKET, (0.0, 0.1, 0.0))


@pytest.mark.parametrize("order", [8, 40, 81])
def test_quadrature_weights_sum_to_one(order):
    _, _, wts = quadrature_nodes(PACKET, order)
    assert math.fsum(wts) == pytest.approx(1.0, abs=1e-14)


def test_quadrature_order_bounds():
    for bad in (3, 201, 40.0):
        with pytest.raises(DomainError):
            quadrature_nodes(PACKET, bad)


def test_ubar_matches_direct_double_integral():
    w = Waveform.gaussian(0.1, 1.0)
    scale = omega_factor(w, FP, 0.0, 4.0)
    c = PACKET.center

    def part(fn):
        val, _ = integrate.dblquad(
            lambda k3, k1: weight(PACKET, (k1, 0.0, k3)) * fn(big_H(FP, k1, k3) * scale),
            c.k1 - 5, c.k1 + 5, c.k3 - 5, c.k3 + 5, epsabs=1e-14, epsrel=1e-12,
        )
        return val

    direct = complex(part(math.cos), part(math.sin))
    got = ubar(PACKET, w, FP, 0.0, 4.0)
    assert abs(got.value - direct) <= 1e-10
    assert got.magnitude == pytest.approx(abs(direct), abs=1e-10)


def _mp_deficit(w, amplitude_tau, order=40):
    """1 - |sum w exp(i Omega)| summed at 50 digits, no centering."""
    k1, k3, wts = quadrature_nodes(PACKET, order)
    scale = omega_factor(w, FP, 0.0, amplitude_tau)
    H = big_H(FP, k1, k3)
    with mpmath.workdps(50):
        s = mpmath.mpf(scale)
        z = mpmath.fsum(mpmath.mpf(a) * mpmath.expj(mpmath.mpf(h) * s) for a, h in zip(wts, H))
        return float(1 - abs(z))


@pytest.mark.parametrize("amp", [1e-1, 1e-3, 1e-6, 1e-9])
def test_deficit_against_extended_precision(amp):
    w = Waveform.gaussian(amp, 1.0)
    got = ubar(PACKET, w, FP, 0.0, 4.0).deficit
    ref = _mp_deficit(w, 4.0)
    assert got == pytest.approx(ref, rel=1e-9)


def test_tiny_amplitude_deficit_nonzero():
    w = Waveform.gaussian(1e-21, 1.0)
    d = ubar(PACKET, w, FP, 0.0, 4.0, method=Method.FIRST_ORDER).deficit
    assert 0.0 < d < 1e-40


def test_zero_waveform_is_identity():
    assert ubar(PACKET, Waveform.zero(), FP, 0.0, 5.0) == DecoherenceFactor.identity()


def test_order_convergence():
    w = Waveform.sine(0.1, 1.0)
    a = ubar(PACKET, w, FP, 0.0, 3.0, order=40)
    b = ubar(PACKET, w, FP, 0.0, 3.0, order=80)
    assert abs(a.value - b.value) <= 1e-12
    assert abs(a.deficit - b.deficit) <= 1e-12


def test_monte_carlo_within_three_sigma():
    w = Waveform.gaussian(0.1, 1.0)
    est = ubar_mc(PACKET, w, FP, 0.0, 4.0, n_samples=200_000)
    q = ubar(PACKET, w, FP, 0.0, 4.0)
    assert abs(est.factor.real_deficit - q.real_deficit) <= 3 * est.stderr_real_deficit
    assert abs(est.factor.imag - q.imag) <= 3 * est.stderr_imag


def test_monte_carlo_reproducible():
    a = sample_momenta(PACKET, 5000, seed=11)
    b = sample_momenta(PACKET, 5000, seed=11)
    c = sample_momenta(PACKET, 5000, seed=12)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    assert not np.array_equal(a[0], c[0])
    with pytest.raises(DomainError):
        ubar_mc(PACKET, Waveform.zero(), FP, 0.0, 1.0, n_samples=10)


def test_scaling_law():
    fp = FrameParams(1.0, 1.0, math.pi / 4, t_i=-4.0)
    d1 = ubar(PACKET, Waveform.gaussian(1e-6, 1.0), fp, 0.0, 4.0, method=Method.FIRST_ORDER).deficit
    d2 = ubar(PACKET, Waveform.gaussian(2e-6, 1.0), fp, 0.0, 4.0, method=Method.FIRST_ORDER).deficit
    assert d2 / d1 == pytest.approx(4.0, abs=1e-3)


def test_wider_packet_decoheres_more():
    w = Waveform.gaussian(0.05, 1.0)
    ds = [ubar(WavePacket.for_frame(FP, s), w, FP, 0.0, 4.0).deficit for s in (0.1, 0.3, 0.6, 1.0)]
    assert ds == sorted(ds) and ds[0] > 0


def test_deficit_pow_examples():
    assert deficit_pow(0.0, 7) == 0.0
    assert deficit_pow(1e-42, 4) == pytest.approx(4e-42, rel=1e-15)
    assert deficit_pow(0.1, 2) == pytest.approx(0.19, rel=1e-15)
    assert deficit_pow(1.0, 3) == 1.0
    with pytest.raises(DomainError):
        deficit_pow(0.1, 0)


@given(st.floats(1e-300, 0.999), st.integers(1, 1 << 20))
def test_deficit_pow_vs_mpmath(d, n):
    # enough digits that 1 - d is not rounded back to 1
    with mpmath.workdps(40 + int(-math.log10(d))):
        ref = float(1 - (1 - mpmath.mpf(d)) ** n)
    assert deficit_pow(d, n) == pytest.approx(ref, rel=1e-12, abs=1e-300)


@given(st.floats(0, 1), st.floats(0, 1))
def test_deficit_combine_bounds(a, b):
    c = deficit_combine(a, b)
    assert max(a, b) - 1e-15 <= c <= min(1.0, a + b) + 1e-15
    assert deficit_combine(a, b) == deficit_combine(b, a)


def test_factor_from_complex_roundtrip():
    u = 0.8 * complex(math.cos(0.3), math.sin(0.3))
    d = DecoherenceFactor.from_complex(u)
    assert d.magnitude == pytest.approx(0.8, rel=1e-15)
    assert d.value == pytest.approx(u, rel=1e-15)
    assert d.sq_deficit == pytest.approx(0.36, rel=1e-14)
    with pytest.raises(DomainError):
        DecoherenceFactor.from_complex(1.1)
