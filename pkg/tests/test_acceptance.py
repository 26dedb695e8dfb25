"""One test per acceptance criterion, each at its stated tolerance."""
import math
import os
import subprocess
import sys
import time
from importlib import resources

import mpmath
import numpy as np
import pytest

from gwspin import geometry as geo
from gwspin import kinematics as kin
from gwspin import quantum as q
from gwspin.config import parse_config, shipped_configs
from gwspin.geometry import ETA, Event
from gwspin.kinematics import FrameParams, Method
from gwspin.oracles import fd_christoffel, fd_spin_connection, rotation_average, simpson_omega, two_point_angles
from gwspin.runner import peak_factor, run_scenario
from gwspin.swapping import outcome_equivalence_check, swap_ladder
from gwspin.wavepacket import DecoherenceFactor, WavePacket, deficit_pow, quadrature_nodes, ubar, ubar_mc
from gwspin.waveform import Waveform

SHIPPED = shipped_configs()
SEED = 20240607


def _scenario(amplitude, kind="gaussian"):
    return SHIPPED[f"{kind}_a1e-1"].with_value("waveform.amplitude", amplitude)


def _factors_over_grid(cfg, stride=6):
    w, p = cfg.build_waveform(), cfg.build_packet()
    return [
        ubar(p, w, cfg.frame, 0.0, tau, cfg.packet.order, Method(cfg.method))
        for tau in cfg.time.taus()[::stride]
    ]


def test_flat_space_null(criterion):
    doc = SHIPPED["gaussian_a1e-1"].to_dict()
    doc["waveform"] = {"kind": "zero", "amplitude": 0.0, "width": None, "frequency": None, "table": None}
    header, rows = run_scenario(parse_config(doc))
    col = {name: i for i, name in enumerate(header)}
    worst = 0.0
    for r in rows:
        worst = max(
            worst,
            abs(r[col["deficit"]]),
            abs(r[col["omega_center"]]),
            abs(r[col["entropy1[deficit]"]]),
            abs(r[col["entropy2[deficit]"]]),
            abs(r[col["entropy1[matrix]"]]),
            abs(r[col["entropy2[matrix]"]]),
            abs(r[col["negativity2[deficit]"]] - 1.0),
            abs(r[col["negativity2[matrix]"]] - 1.0),
        )
    criterion("flat-space null test", worst, 1e-15)


def _boundary_worst(fp):
    w = Waveform.gaussian(0.1, 1.0)
    p = WavePacket.for_frame(fp, 0.5)
    k1, k3, _ = quadrature_nodes(p, 40)
    worst = float(np.abs(kin.big_H(fp, k1, k3)).max())
    for tau in np.linspace(0.0, 12.0, 25):
        worst = max(worst, ubar(p, w, fp, 0.0, float(tau)).deficit)
    return worst


@pytest.mark.parametrize(
    "label, fp",
    [
        ("rapidity 0", FrameParams(1.0, 0.0, math.pi / 4, t_i=-4.0, allow_boundary=True)),
        ("angle 0", FrameParams(1.0, 1.0, 0.0, t_i=-4.0, allow_boundary=True)),
        ("angle pi/2", FrameParams(1.0, 1.0, math.pi / 2, t_i=-4.0, allow_boundary=True)),
    ],
)
def test_condition_boundaries(criterion, label, fp):
    criterion(f"condition test, {label}: H = 0 and no decoherence", _boundary_worst(fp), 1e-15)


def test_geometry_oracle(criterion):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for w in (Waveform.gaussian(0.1, 1.0), Waveform.sine(0.1, 1.3)):
        for _ in range(50):
            ev = Event(*rng.uniform(-2, 2, 4))
            for mine, ref in (
                (geo.christoffel_at(w, ev), fd_christoffel(w, ev)),
                (geo.spin_connection_at(w, ev), fd_spin_connection(w, ev)),
            ):
                worst = max(worst, float(np.abs(mine - ref).max() / np.abs(ref).max()))
    criterion("geometry oracle (Christoffel, spin connection)", worst, 1e-6)


def test_kinematic_contracts(criterion):
    rng = np.random.default_rng(SEED + 1)
    w = Waveform.gaussian(0.1, 1.0)
    worst = 0.0
    for _ in range(100):
        fp = FrameParams(
            mass=rng.uniform(0.5, 2.0),
            rapidity=rng.uniform(0.1, 2.0),
            angle=rng.uniform(0.05, math.pi / 2 - 0.05),
        )
        ev = Event(*rng.uniform(-2, 2, 4))
        k = tuple(rng.uniform(-1.5, 1.5, 3))
        g = geo.metric_at(w, ev)
        u = kin.four_velocity(w, fp, ev)
        acc, _ = kin.acceleration(w, fp, ev)
        lam_low = ETA @ kin.lorentz_generator(w, fp, ev)
        phi = kin.wigner_generator(w, fp, ev, k)
        worst = max(
            worst,
            abs(u @ g @ u + 1.0),
            abs(u @ g @ acc),
            float(np.abs(lam_low + lam_low.T).max()),
            float(np.abs(kin.lorentz_generator(w, fp, ev) - kin.lorentz_generator_definitional(w, fp, ev)).max()),
            abs(phi[1, 3] + kin.big_G(w, fp, ev) * kin.big_H_at(fp, k)),
        )
    criterion("kinematic contracts", worst, 1e-10)


def test_omega_oracle(criterion):
    w = Waveform.gaussian(0.01, 1.0)
    worst = 0.0
    for fp, tau_f in ((FrameParams(1.0, 1.0, math.pi / 4, t_i=-3.0), 3.0), (FrameParams(1.3, 0.6, 0.4, t_i=-2.0), 4.5)):
        for k in ((0.0, 0.0, 0.0), (0.4, 0.0, -0.3)):
            closed = kin.omega(w, fp, 0.0, tau_f, k).value
            worst = max(worst, abs(simpson_omega(w, fp, 0.0, tau_f, k, panels=400) - closed) / abs(closed))
    criterion("Omega closed form vs Simpson quadrature", worst, 1e-6)


def test_channel_identity(criterion):
    factors = [DecoherenceFactor.from_complex(z) for z in (1.0, 0.9, 0.5 + 0.4j, -0.3 + 0.2j, 0.0)]
    factors += _factors_over_grid(_scenario(0.1), stride=20)
    worst = 0.0
    for d in factors:
        angles, weights = two_point_angles(d)
        for j in (0, 1):
            for k in (0, 1):
                worst = max(worst, float(np.abs(q.channel_table(d, j, k) - rotation_average(angles, weights, j, k)).max()))
    criterion("channel table vs rotation average", worst, 1e-10)


@pytest.mark.parametrize("amp", [1e-3, 1e-2, 1e-1])
def test_two_particle_identities(criterion, amp):
    worst = 0.0
    for d in _factors_over_grid(_scenario(amp)) + [peak_factor(_scenario(amp))[1]]:
        m2 = abs(d.value) ** 2
        rho = q.evolve_ghz(2, d)
        spectrum = np.sort([(1 - m2) / 2, (1 + m2) / 2, 0.0, 0.0])
        worst = max(
            worst,
            float(np.abs(rho.eigenvalues() - spectrum).max()),
            abs(q.von_neumann_entropy(rho) - q.binary_entropy((1 - m2) / 2)),
            abs(q.negativity(rho) - m2),
        )
    criterion(f"two-particle identities, A={amp:g}", worst, 1e-10)


def test_single_particle_identity(criterion):
    worst = 0.0
    for amp in (1e-3, 1e-2, 1e-1):
        for d in _factors_over_grid(_scenario(amp, "sine")):
            ref = q.binary_entropy((1 - abs(d.value)) / 2)
            worst = max(worst, abs(q.von_neumann_entropy(q.evolve_single(d)) - ref))
    criterion("single-particle entropy identity", worst, 1e-10)


def test_swapping(criterion):
    factors = [DecoherenceFactor.from_complex(r * complex(math.cos(a), math.sin(a))) for r, a in ((1.0, 0.0), (0.95, 0.3), (0.85, -1.2), (0.71, 2.0))]
    factors.append(peak_factor(_scenario(0.1))[1])
    p_err = rel = spread = 0.0
    for d in factors:
        m = abs(d.value)
        assert m * m >= 0.5
        levels = swap_ladder(d, 2)
        rel = max(rel, abs(levels[1].negativity_matrix - m**4) / m**4, abs(levels[2].negativity_matrix - m**8) / m**8)
        p_err = max(p_err, levels[1].probability_error, levels[2].probability_error)
        rho = q.evolve_ghz(2, d)
        spread = max(spread, outcome_equivalence_check(rho, rho.relabel(("C", "D")))["max_difference"])
    criterion("swapping: outcome probabilities 1/4", p_err, 1e-12)
    criterion("swapping: negativity |u|^4 and |u|^8 (relative)", rel, 1e-8)
    criterion("swapping: outcome independence", spread, 1e-10)


def test_deficit_track(criterion):
    worst = 0.0
    with mpmath.workdps(80):
        for n in (1, 2, 4, 1000, 2**20, 2**40, 2**60):
            ref = 1 - (1 - mpmath.mpf("1e-42")) ** n
            worst = max(worst, abs(float((deficit_pow(1e-42, n) - ref) / ref)))
    criterion("deficit_pow(1e-42, n) vs extended precision", worst, 1e-12)

    cfg = _scenario(1e-2)
    tau, d = peak_factor(cfg)
    rel = 0.0
    for lvl in swap_ladder(d, 4):
        rel = max(rel, abs(lvl.deficit_matrix - lvl.deficit) / lvl.deficit)
    for d in _factors_over_grid(cfg, stride=3):
        if d.sq_deficit >= 1e-8:
            rel = max(rel, abs((1 - q.negativity(q.evolve_ghz(2, d))) - d.sq_deficit) / d.sq_deficit)
    criterion("matrix vs deficit track at A=1e-2 (relative)", rel, 1e-6)


def test_ubar_monte_carlo(criterion):
    worst_sigma = 0.0
    for name in ("gaussian_a1e-1", "sine_a1e-1", "gaussian_a1e-6"):
        cfg = SHIPPED[name]
        tau = cfg.time.tau_f / 2
        p, w = cfg.build_packet(), cfg.build_waveform()
        quad = ubar(p, w, cfg.frame, 0.0, tau, cfg.packet.order)
        mc = ubar_mc(p, w, cfg.frame, 0.0, tau, n_samples=1_000_000, seed=cfg.seed)
        worst_sigma = max(
            worst_sigma,
            abs(mc.factor.real_deficit - quad.real_deficit) / mc.stderr_real_deficit,
            abs(mc.factor.imag - quad.imag) / mc.stderr_imag,
        )
    criterion("u_bar quadrature vs Monte Carlo (standard errors)", worst_sigma, 3.0)

    worst = 0.0
    for cfg in SHIPPED.values():
        p, w = cfg.build_packet(), cfg.build_waveform()
        for tau in cfg.time.taus()[::10]:
            a = ubar(p, w, cfg.frame, 0.0, tau, 40)
            b = ubar(p, w, cfg.frame, 0.0, tau, 80)
            worst = max(worst, abs(a.value - b.value), abs(a.deficit - b.deficit))
    criterion("u_bar quadrature order 40 vs 80", worst, 1e-12)


def test_scaling_law(criterion):
    worst = 0.0
    for kind in ("gaussian", "sine"):
        cfg = SHIPPED[f"{kind}_a1e-6"]
        p, fp = cfg.build_packet(), cfg.frame
        for tau in (cfg.time.tau_f / 4, cfg.time.tau_f / 2):
            d1 = ubar(p, cfg.with_value("waveform.amplitude", 1e-6).build_waveform(), fp, 0.0, tau, method=Method.FIRST_ORDER)
            d2 = ubar(p, cfg.with_value("waveform.amplitude", 2e-6).build_waveform(), fp, 0.0, tau, method=Method.FIRST_ORDER)
            worst = max(worst, abs(d2.deficit / d1.deficit - 4.0))
    criterion("amplitude scaling law delta(2A)/delta(A) = 4", worst, 1e-3)


def test_ghz_equivalence(criterion):
    start = time.perf_counter()
    d = peak_factor(_scenario(0.1))[1]
    worst = 0.0
    for n in range(1, 8):
        rho = q.ghz(n)
        for i in range(n):
            rho = q.apply_channel(d, rho, i)
        worst = max(worst, float(np.abs(q.evolve_ghz(n, d).data - rho.data).max()))
    elapsed = time.perf_counter() - start
    criterion("GHZ construction vs per-qubit channel, N <= 7", worst, 1e-12)
    criterion("GHZ equivalence runtime (s)", elapsed, 30.0)


def test_determinism(criterion, tmp_path):
    config = str(resources.files("gwspin") / "configs" / "sine_a1e-1.json")
    outputs = []
    for cmd in (["scenario"], ["swap-ladder"]):
        for threads in ("1", "1", "4"):
            env = dict(os.environ, GWSPIN_THREADS=threads)
            path = tmp_path / f"{cmd[0]}_{threads}_{len(outputs)}.csv"
            subprocess.run([sys.executable, "-m", "gwspin.cli", *cmd, config, "--out", str(path)], env=env, check=True)
            outputs.append((cmd[0], path.read_bytes()))
    differing = sum(
        1 for name in ("scenario", "swap-ladder") if len({b for n, b in outputs if n == name}) != 1
    )
    criterion("byte-identical CSV across runs and thread counts (differing outputs)", differing, 0)
