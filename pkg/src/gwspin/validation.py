"""Invariant suites for every module, reported as measured worst error vs tolerance."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import mpmath
import numpy as np

from . import geometry, kinematics, oracles, quantum, swapping, wavepacket
from .config import shipped_configs
from .geometry import ETA, Event
from .kinematics import FrameParams, Method
from .wavepacket import DecoherenceFactor, WavePacket
from .waveform import Waveform

SEED = 20240607


@dataclass(frozen=True)
class Check:
    name: str
    worst: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.worst <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<48} worst={self.worst:.3e}  tol={self.tolerance:.1e}"


def _rel(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    scale = max(float(np.max(np.abs(b))), 1e-300)
    return float(np.max(np.abs(a - b))) / scale


def random_frames(rng, n):
    for _ in range(n):
        yield FrameParams(
            mass=float(rng.uniform(0.5, 2.0)),
            rapidity=float(rng.uniform(0.1, 2.0)),
            angle=float(rng.uniform(0.05, math.pi / 2 - 0.05)),
            t_i=float(rng.uniform(-3, 3)),
            z_i=float(rng.uniform(-1, 1)),
        )


def random_events(rng, n):
    return [Event(*rng.uniform(-2, 2, 4)) for _ in range(n)]


WAVES = (Waveform.gaussian(0.1, 1.0), Waveform.sine(0.1, 1.3))


def check_waveform_derivative(n):
    worst = 0.0
    for w in WAVES:
        scale = w.width if w.width else 1.0 / w.frequency
        h = 1e-6 * scale
        for u in np.linspace(-3, 3, n):
            fd = (w(u + h) - w(u - h)) / (2 * h)
            d = w.deriv(u)
            worst = max(worst, abs(fd - d) / max(abs(d), w.amplitude / scale))
    return Check("waveform derivative vs central difference", worst, 1e-6)


def check_flatness(n):
    rng = np.random.default_rng(SEED)
    w = Waveform.zero()
    worst = 0.0
    for ev in random_events(rng, n):
        worst = max(
            worst,
            np.abs(geometry.christoffel_at(w, ev)).max(),
            np.abs(geometry.spin_connection_at(w, ev)).max(),
            np.abs(geometry.vierbein_at(w, ev).e - np.eye(4)).max(),
        )
    return Check("flat space: Gamma, omega vanish, tetrad = 1", worst, 0.0)


def check_christoffel(n):
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for w in WAVES:
        for ev in random_events(rng, n):
            worst = max(worst, _rel(oracles.fd_christoffel(w, ev), geometry.christoffel_at(w, ev)))
    return Check("Christoffel vs finite-difference metric", worst, 1e-6)


def check_spin_connection(n):
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for w in WAVES:
        for ev in random_events(rng, n):
            worst = max(worst, _rel(oracles.fd_spin_connection(w, ev), geometry.spin_connection_at(w, ev)))
    return Check("spin connection vs definitional oracle", worst, 1e-6)


def check_tetrad(n):
    rng = np.random.default_rng(SEED + 3)
    worst_ortho = worst_anti = 0.0
    for w in WAVES:
        for ev in random_events(rng, n):
            vb = geometry.vierbein_at(w, ev)
            ginv = geometry.inverse_metric_at(w, ev)
            worst_ortho = max(worst_ortho, np.abs(vb.e @ ginv @ vb.e.T - ETA).max())
            worst_ortho = max(worst_ortho, np.abs(vb.e @ vb.e_inv - np.eye(4)).max())
            om = geometry.spin_connection_at(w, ev)
            low = np.einsum("ac,cmb->amb", ETA, om)
            worst_anti = max(worst_anti, np.abs(low + low.transpose(2, 1, 0)).max())
    return [
        Check("tetrad orthonormality", worst_ortho, 1e-12),
        Check("spin connection antisymmetry", worst_anti, 1e-12),
    ]


def check_kinematics(n):
    rng = np.random.default_rng(SEED + 4)
    uu = ua = lam_anti = lam_def = phi_err = fg = 0.0
    for i, fp in enumerate(random_frames(rng, n)):
        w = WAVES[i % 2]
        ev = random_events(rng, 1)[0]
        g = geometry.metric_at(w, ev)
        u = kinematics.four_velocity(w, fp, ev)
        a, _ = kinematics.acceleration(w, fp, ev)
        uu = max(uu, abs(u @ g @ u + 1.0))
        ua = max(ua, abs(u @ g @ a))
        lam = kinematics.lorentz_generator(w, fp, ev)
        low = ETA @ lam
        lam_anti = max(lam_anti, np.abs(low + low.T).max())
        lam_def = max(lam_def, np.abs(lam - kinematics.lorentz_generator_definitional(w, fp, ev)).max())
        k = (float(rng.normal(0, fp.mass)), 0.0, float(rng.normal(0, fp.mass)))
        phi = kinematics.wigner_generator(w, fp, ev, k)
        expected = np.zeros((4, 4))
        expected[1, 3] = -kinematics.big_G(w, fp, ev) * kinematics.big_H_at(fp, k)
        expected[3, 1] = -expected[1, 3]
        phi_err = max(phi_err, np.abs(phi - expected).max())
        fg = max(fg, abs(kinematics.big_F(w, fp, ev) + kinematics.big_G(w, fp, ev)))
    return [
        Check("u.u = -1", uu, 1e-12),
        Check("u.a = 0", ua, 1e-12),
        Check("lambda antisymmetric (eta-lowered)", lam_anti, 1e-12),
        Check("lambda closed form vs definitional", lam_def, 1e-10),
        Check("phi^1_3 = -G H, other entries 0", phi_err, 1e-12),
        Check("F + G = 0", fg, 1e-15),
    ]


def check_omega(n):
    rng = np.random.default_rng(SEED + 5)
    add = meth = 0.0
    for fp in random_frames(rng, n):
        w = Waveform.gaussian(0.1, 1.0)
        k = fp.center_momentum()
        t0, t1, t2 = sorted(rng.uniform(0, 6, 3))
        o01 = kinematics.omega(w, fp, t0, t1, k).value
        o12 = kinematics.omega(w, fp, t1, t2, k).value
        o02 = kinematics.omega(w, fp, t0, t2, k).value
        scale = max(abs(o01), abs(o12), abs(o02), 1e-300)
        add = max(add, abs(o01 + o12 - o02) / scale)
        first = kinematics.omega(w, fp, t0, t2, k, Method.FIRST_ORDER).value
        bound = 0.5 * 0.1**2 * abs(kinematics.big_H_at(fp, k))
        meth = max(meth, abs(o02 - first) / bound)
    # quadrature of phi^1_3 along the worldline
    w = Waveform.gaussian(0.01, 1.0)
    fp = FrameParams(1.0, 1.0, math.pi / 4, t_i=-3.0)
    k = fp.center_momentum()
    simp = 0.0
    for tf in (1.0, 3.0, 4.5):
        exact = kinematics.omega(w, fp, 0.0, tf, k).value
        simp = max(simp, abs(oracles.simpson_omega(w, fp, 0.0, tf, k) / exact - 1.0))
    return [
        Check("Omega additivity", add, 1e-15),
        Check("|Omega_exact - Omega_first| / (A^2 |H| / 2)", meth, 1.0),
        Check("Omega vs Simpson quadrature (A=0.01)", simp, 1e-6),
    ]


def check_packet(level):
    p = WavePacket(0.7, kinematics.LocalMomentum(0.3, 0.0, -0.2), 1.0)
    g = np.linspace(-12, 12, 1201) * p.width
    h = g[1] - g[0]
    dens = np.array([[wavepacket.weight(p, (p.center.k1 + a, 0.0, p.center.k3 + b)) for b in g] for a in g])
    norm = abs(dens.sum() * h * h - 1.0)
    checks = [Check("packet weight normalization", norm, 1e-10)]

    conv = 0.0
    for cfg in shipped_configs().values():
        if cfg.waveform.amplitude > 0.1:
            continue
        w, pk = cfg.build_waveform(), cfg.build_packet()
        taus = cfg.time.taus()[:: (1 if level == "full" else 10)]
        for tau in taus:
            a = wavepacket.ubar(pk, w, cfg.frame, 0.0, tau, 40)
            b = wavepacket.ubar(pk, w, cfg.frame, 0.0, tau, 80)
            conv = max(conv, abs(a.deficit - b.deficit), abs(a.phase - b.phase))
    checks.append(Check("u_bar order 40 vs 80 (shipped scenarios)", conv, 1e-12))

    fp = FrameParams(1.0, 1.0, math.pi / 4, t_i=-4.0)
    pk = WavePacket.for_frame(fp, 0.5)
    d1 = wavepacket.ubar(pk, Waveform.gaussian(1e-6, 1.0), fp, 0.0, 4.0, method=Method.FIRST_ORDER).deficit
    d2 = wavepacket.ubar(pk, Waveform.gaussian(2e-6, 1.0), fp, 0.0, 4.0, method=Method.FIRST_ORDER).deficit
    checks.append(Check("deficit scaling delta(2A)/delta(A) = 4", abs(d2 / d1 / 4.0 - 1.0), 1e-3))

    deltas = [
        wavepacket.ubar(WavePacket.for_frame(fp, wd), Waveform.gaussian(1e-3, 1.0), fp, 0.0, 4.0).deficit
        for wd in (0.1, 0.5, 1.0, 2.0)
    ]
    drop = max([0.0] + [deltas[i] - deltas[i + 1] for i in range(3)])
    checks.append(Check("deficit non-decreasing in packet width", drop, 0.0))

    worst = 0.0
    mpmath.mp.dps = 60
    for n in (2, 3, 8, 1000):
        for delta in (1e-42, 1e-21, 1e-8, 0.3):
            ref = 1 - (1 - mpmath.mpf(delta)) ** n
            worst = max(worst, abs(float((wavepacket.deficit_pow(delta, n) - ref) / ref)))
    checks.append(Check("deficit_pow vs extended precision", worst, 1e-12))
    return checks


def check_monte_carlo(n_samples):
    checks = []
    scen = shipped_configs()
    for key in ("gaussian_a1e-1", "sine_a1e-1", "gaussian_a1e-6"):
        cfg = scen[key]
        w, pk = cfg.build_waveform(), cfg.build_packet()
        tau = 0.5 * cfg.time.tau_f
        gh = wavepacket.ubar(pk, w, cfg.frame, 0.0, tau, cfg.packet.order)
        mc = wavepacket.ubar_mc(pk, w, cfg.frame, 0.0, tau, n_samples, cfg.seed)
        z = max(
            abs(gh.real_deficit - mc.factor.real_deficit) / mc.stderr_real_deficit,
            abs(gh.imag - mc.factor.imag) / mc.stderr_imag,
        )
        checks.append(Check(f"u_bar quadrature vs Monte Carlo [{key}] (sigmas)", z, 3.0))
    return checks


def _channel_scenario():
    fp = FrameParams(1.0, 1.0, math.pi / 4, t_i=-4.0)
    pk = WavePacket.for_frame(fp, 0.5)
    w = Waveform.gaussian(0.1, 1.0)
    return fp, pk, w, 0.0, 4.0


def check_channel():
    fp, pk, w, t0, t1 = _channel_scenario()
    u = wavepacket.ubar(pk, w, fp, t0, t1)
    k1, k3, wts = wavepacket.quadrature_nodes(pk)
    angles = kinematics.big_H(fp, k1, k3) * kinematics.omega_factor(w, fp, t0, t1)
    worst = 0.0
    for j in (0, 1):
        for k in (0, 1):
            ref = oracles.rotation_average(angles, wts, j, k)
            worst = max(worst, np.abs(quantum.channel_table(u, j, k) - ref).max())
    synth = DecoherenceFactor.from_complex(0.8 + 0.1j)
    ang, wt = oracles.two_point_angles(synth)
    for j in (0, 1):
        for k in (0, 1):
            worst = max(worst, np.abs(quantum.channel_table(synth, j, k) - oracles.rotation_average(ang, wt, j, k)).max())
    return Check("channel table vs rotation average", worst, 1e-10)


def check_quantum(n):
    rng = np.random.default_rng(SEED + 6)
    checks = []
    # trace / Hermiticity preservation on random single-qubit operators
    u = DecoherenceFactor.from_complex(0.6 + 0.3j)
    worst = 0.0
    for _ in range(n):
        x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        x = x + x.conj().T
        y = quantum.apply_channel_matrix(u, x, 0, 1)
        worst = max(worst, abs(np.trace(y) - np.trace(x)), np.abs(y - y.conj().T).max())
    checks.append(Check("channel trace/Hermiticity preservation", worst, 1e-14))

    spec = negid = ent2 = ent1 = 0.0
    for amp in (1e-3, 1e-2, 1e-1):
        fp, pk, _, t0, t1 = _channel_scenario()
        u = wavepacket.ubar(pk, Waveform.gaussian(amp, 1.0), fp, t0, t1)
        mag2 = u.c_bar**2 + u.s_bar**2
        rho = quantum.evolve_ghz(2, u)
        ev = rho.check_positive()
        spec = max(spec, np.abs(ev - np.sort([0.0, 0.0, (1 - mag2) / 2, (1 + mag2) / 2])).max())
        negid = max(negid, abs(quantum.negativity(rho, 0) - mag2))
        ent2 = max(ent2, abs(quantum.von_neumann_entropy(rho) - quantum.analytic_two_particle(u).entropy))
        ent1 = max(
            ent1,
            abs(quantum.von_neumann_entropy(quantum.evolve_single(u)) - quantum.binary_entropy((1 - math.sqrt(mag2)) / 2)),
        )
    checks += [
        Check("two-particle spectrum {(1+-|u|^2)/2, 0, 0}", spec, 1e-12),
        Check("two-particle negativity = |u|^2", negid, 1e-10),
        Check("two-particle entropy matrix vs deficit track", ent2, 1e-10),
        Check("single-particle entropy = h((1-|u|)/2)", ent1, 1e-10),
    ]

    fp, pk, _, t0, t1 = _channel_scenario()
    u = wavepacket.ubar(pk, Waveform.gaussian(1e-2, 1.0), fp, t0, t1)
    mat_def = 1.0 - quantum.negativity(quantum.evolve_ghz(2, u), 0)
    checks.append(Check("negativity deficit matrix vs deficit track", abs(mat_def / u.sq_deficit - 1), 1e-6))

    ghz_eq = evo_eq = 0.0
    u = DecoherenceFactor.from_complex(0.9 + 0.1j)
    for nq in range(1, 8):
        ghz_eq = max(ghz_eq, np.abs(quantum.ghz(nq).data - quantum.ghz_from_units(nq).data).max())
        rho = quantum.ghz(nq)
        for q in range(nq):
            rho = quantum.apply_channel(u, rho, q)
        evo_eq = max(evo_eq, np.abs(rho.data - quantum.evolve_ghz(nq, u).data).max())
    checks += [
        Check("GHZ formula vs explicit projector (N<=7)", ghz_eq, 1e-14),
        Check("evolved GHZ vs per-qubit channel (N<=7)", evo_eq, 1e-12),
    ]
    return checks


def check_swapping():
    prob = amp = indep = track = 0.0
    for mag2 in (0.5, 0.8, 0.95):
        u = DecoherenceFactor.from_complex(math.sqrt(mag2) * complex(math.cos(0.3), math.sin(0.3)))
        rho = quantum.evolve_ghz(2, u)
        rep = swapping.outcome_equivalence_check(rho, rho)
        prob = max(prob, max(abs(p - 0.25) for p in rep["probabilities"]), abs(sum(rep["probabilities"]) - 1))
        indep = max(indep, rep["max_difference"])
        for lvl in swapping.swap_ladder(u, 3):
            target = mag2 ** (2**lvl.level)
            amp = max(amp, abs(lvl.negativity_matrix / target - 1))
            if lvl.deficit_matrix >= 1e-8:
                track = max(track, abs(lvl.deficit_matrix / lvl.deficit - 1))
    return [
        Check("swap outcome probabilities = 1/4", prob, 1e-12),
        Check("ladder negativity = |u|^(2^(l+1))", amp, 1e-8),
        Check("swap outcome independence", indep, 1e-10),
        Check("ladder matrix vs deficit track", track, 1e-6),
    ]


def run_validation(level: str = "quick") -> list[Check]:
    if level not in ("quick", "full"):
        raise ValueError(f"level must be quick or full, got {level!r}")
    full = level == "full"
    n = 50 if full else 10
    steps: list[Callable[[], object]] = [
        lambda: check_waveform_derivative(100 if full else 20),
        lambda: check_flatness(n),
        lambda: check_christoffel(n),
        lambda: check_spin_connection(n),
        lambda: check_tetrad(n),
        lambda: check_kinematics(100 if full else 20),
        lambda: check_omega(n),
        lambda: check_packet(level),
        check_channel,
        lambda: check_quantum(100 if full else 20),
        check_swapping,
    ]
    if full:
        steps.append(lambda: check_monte_carlo(1_000_000))
    out: list[Check] = []
    for step in steps:
        res = step()
        out.extend(res if isinstance(res, list) else [res])
    return out


def report(checks: list[Check]) -> str:
    lines = [c.line() for c in checks]
    failed = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    return "\n".join(lines)
