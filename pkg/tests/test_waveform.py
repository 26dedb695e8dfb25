import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gwspin.errors import RangeError, WaveformError
from gwspin.waveform import Waveform


def test_gaussian_peak():
    assert Waveform.gaussian(0.1, 1.0)(0.0) == 0.1


def test_zero_everywhere():
    w = Waveform.zero()
    for u in (-1e3, 0.0, 3.7):
        assert w(u) == 0.0
        assert w.deriv(u) == 0.0


def test_sine_peak():
    assert Waveform.sine(0.01, 2.0)(math.pi / 4) == pytest.approx(0.01, rel=1e-15)


def test_derivative_examples():
    assert Waveform.gaussian(0.1, 1.0).deriv(0.0) == 0.0
    assert Waveform.sine(0.01, 2.0).deriv(0.0) == pytest.approx(0.02, rel=1e-15)


def test_tabulated_derivative_matches_analytic():
    g = Waveform.gaussian(0.1, 1.0)
    u = np.linspace(-6, 6, 20001)
    t = Waveform.tabulated(u, g(u))
    assert t.deriv(0.5) == pytest.approx(g.deriv(0.5), rel=1e-6)
    assert t(0.5) == pytest.approx(g(0.5), rel=1e-9)


def test_tabulated_range_error():
    u = np.linspace(-1, 1, 11)
    t = Waveform.tabulated(u, 0.01 * u)
    with pytest.raises(RangeError):
        t(1.5)
    with pytest.raises(RangeError):
        t.deriv(-1.01)


def test_tabulated_csv(tmp_path):
    path = tmp_path / "wave.csv"
    u = np.linspace(-2, 2, 41)
    path.write_text("u,f\n" + "".join(f"{a!r},{0.05 * math.exp(-a * a)!r}\n" for a in u.tolist()))
    t = Waveform.from_csv(path)
    assert t(0.0) == pytest.approx(0.05)
    bad = tmp_path / "bad.csv"
    bad.write_text("u,g\n0,0\n1,0\n2,0\n3,0\n")
    with pytest.raises(WaveformError, match="header"):
        Waveform.from_csv(bad)


def test_tabulated_needs_increasing_u():
    with pytest.raises(WaveformError, match="increasing"):
        Waveform.tabulated([0, 1, 1, 2], [0, 0, 0, 0])


@pytest.mark.parametrize("amp", [0.5, -0.6, 2.0])
def test_amplitude_guard(amp):
    with pytest.raises(WaveformError):
        Waveform.gaussian(amp, 1.0)
    with pytest.raises(WaveformError):
        Waveform.sine(amp, 1.0)


def test_monotone_interpolation_has_no_overshoot():
    # a step-like table: a cubic spline would ring, PCHIP must not
    u = np.linspace(0, 10, 11)
    f = np.where(u < 5, 0.0, 0.1)
    t = Waveform.tabulated(u, f)
    fine = np.linspace(0, 10, 1001)
    vals = t(fine)
    assert vals.min() >= 0.0 and vals.max() <= 0.1


@pytest.mark.parametrize("w", [Waveform.gaussian(0.1, 1.0), Waveform.gaussian(0.03, 2.5), Waveform.sine(0.1, 1.3)])
def test_derivative_matches_central_difference(w):
    scale = w.width if w.width else 1.0 / w.frequency
    h = 1e-6 * scale
    worst = 0.0
    for u in np.linspace(-4, 4, 101):
        fd = (w(u + h) - w(u - h)) / (2 * h)
        worst = max(worst, abs(fd - w.deriv(u)) / max(abs(w.deriv(u)), w.amplitude / scale))
    assert worst <= 1e-6


@given(st.floats(-50, 50), st.floats(1e-3, 0.49), st.floats(0.1, 5))
def test_gaussian_even_and_bounded(u, amp, width):
    w = Waveform.gaussian(amp, width)
    assert w(u) == w(-u)
    assert 0.0 <= w(u) <= amp


@given(st.floats(-50, 50), st.floats(1e-3, 0.49), st.floats(0.1, 5))
def test_sine_periodic_and_bounded(u, amp, freq):
    w = Waveform.sine(amp, freq)
    assert abs(w(u)) <= amp
    assert w(u + 2 * math.pi / freq) == pytest.approx(w(u), abs=1e-12)


def test_vectorized_evaluation():
    w = Waveform.gaussian(0.1, 1.0)
    u = np.array([0.0, 1.0])
    np.testing.assert_allclose(w(u), [0.1, 0.1 * math.exp(-1)], rtol=1e-15)
