"""Scenario execution: proper-time sweeps, swap ladders and parameter sweeps as CSV."""
from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Sequence

from .config import ScenarioConfig
from .errors import GwspinError, NumericalError
from .kinematics import Method, omega, phase_at
from .quantum import (
    analytic_single_particle,
    analytic_two_particle,
    bipartitions,
    evolve_ghz,
    evolve_single,
    negativity,
    von_neumann_entropy,
)
from .swapping import MAX_MATRIX_DEPTH, swap_ladder
from .wavepacket import DecoherenceFactor, ubar
from .waveform import evaluate

THREADS_ENV = "GWSPIN_THREADS"

BASE_COLUMNS = ["tau", "u", "f", "omega_center", "deficit", "abs_ubar", "phase"]
DEFICIT_COLUMNS = ["entropy1[deficit]", "entropy2[deficit]", "negativity2[deficit]", "negativity2_deficit[deficit]"]
MATRIX_COLUMNS = ["entropy1[matrix]", "entropy2[matrix]", "negativity2[matrix]", "negativity2_deficit[matrix]"]
LADDER_COLUMNS = [
    "tau",
    "level",
    "n",
    "negativity[deficit]",
    "deficit[deficit]",
    "negativity[matrix]",
    "deficit[matrix]",
    "max_p_error[matrix]",
]


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def fmt(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        return str(x)
    return format(float(x), ".17g")


def _ghz_labels(n: int) -> list[str]:
    return [f"A{i + 1}" for i in range(n)]


def scenario_columns(cfg: ScenarioConfig) -> list[str]:
    cols = list(BASE_COLUMNS)
    if cfg.track in ("deficit", "both"):
        cols += DEFICIT_COLUMNS
    if cfg.track in ("matrix", "both"):
        cols += MATRIX_COLUMNS
        if cfg.particles > 2:
            labels = _ghz_labels(cfg.particles)
            for part in bipartitions(cfg.particles):
                side = ".".join(labels[i] for i in part)
                cols.append(f"negativity_ghz{cfg.particles}_{side}[matrix]")
    return cols


def scenario_row(cfg: ScenarioConfig, tau: float, waveform=None, packet=None) -> list[Any]:
    w = waveform or cfg.build_waveform()
    p = packet or cfg.build_packet()
    fp = cfg.frame
    method = Method(cfg.method)
    u = float(phase_at(fp, tau))
    factor = ubar(p, w, fp, 0.0, tau, cfg.packet.order, method)
    row: list[Any] = [
        tau,
        u,
        evaluate(w, u),
        omega(w, fp, 0.0, tau, fp.center_momentum(), method).value,
        factor.deficit,
        factor.magnitude,
        factor.phase,
    ]
    if cfg.track in ("deficit", "both"):
        two = analytic_two_particle(factor)
        row += [analytic_single_particle(factor), two.entropy, two.negativity, two.negativity_deficit]
    if cfg.track in ("matrix", "both"):
        rho2 = evolve_ghz(2, factor)
        neg2 = negativity(rho2, 0)
        row += [von_neumann_entropy(evolve_single(factor)), von_neumann_entropy(rho2), neg2, 1.0 - neg2]
        if cfg.particles > 2:
            rho_n = evolve_ghz(cfg.particles, factor)
            row += [negativity(rho_n, part) for part in bipartitions(cfg.particles)]
    return row


def run_scenario(cfg: ScenarioConfig, threads: int | None = None) -> tuple[list[str], list[list[Any]]]:
    """Rows for every proper time on the grid, in grid order."""
    w = cfg.build_waveform()
    p = cfg.build_packet()

    def one(tau):
        try:
            return scenario_row(cfg, tau, w, p)
        except GwspinError as exc:
            raise NumericalError(f"row tau={tau!r}: {exc}") from exc

    taus = cfg.time.taus()
    threads = threads or thread_count()
    if threads == 1:
        rows = [one(t) for t in taus]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, taus))
    return scenario_columns(cfg), rows


def peak_factor(cfg: ScenarioConfig) -> tuple[float, DecoherenceFactor]:
    """Grid proper time with the largest deficit, and u_bar there.

    A passing pulse leaves Omega ~ 0 once f returns to zero, so the end of the
    grid is usually the least interesting point for swapping.
    """
    w, p = cfg.build_waveform(), cfg.build_packet()
    best = (0.0, DecoherenceFactor.identity())
    for tau in cfg.time.taus():
        d = ubar(p, w, cfg.frame, 0.0, tau, cfg.packet.order, Method(cfg.method))
        if d.deficit > best[1].deficit:
            best = (tau, d)
    return best


def run_swap_ladder(
    cfg: ScenarioConfig, depth: int | None = None, factor: DecoherenceFactor | None = None
) -> tuple[list[str], list[list[Any]]]:
    """One row per ladder level, using u_bar at the peak-deficit grid point unless given."""
    depth = cfg.swap_depth if depth is None else depth
    tau = None
    if factor is None:
        tau, factor = peak_factor(cfg)
    deficit_levels = swap_ladder(factor, depth, matrix=False)
    matrix_levels = []
    if cfg.track in ("matrix", "both"):
        matrix_levels = swap_ladder(factor, min(depth, MAX_MATRIX_DEPTH), matrix=True)
    rows = []
    for lvl in deficit_levels:
        m = matrix_levels[lvl.level] if lvl.level < len(matrix_levels) else None
        rows.append(
            [
                tau,
                lvl.level,
                lvl.n,
                lvl.negativity,
                lvl.deficit,
                m.negativity_matrix if m else None,
                m.deficit_matrix if m else None,
                m.probability_error if m else None,
            ]
        )
    return list(LADDER_COLUMNS), rows


def run_sweep(
    cfg: ScenarioConfig, param: str, values: Sequence[Any], threads: int | None = None
) -> tuple[list[str], list[list[Any]]]:
    """Scenario rows for each value of a dotted-path parameter, value in the first column."""
    header: list[str] | None = None
    rows = []
    for value in values:
        sub = cfg.with_value(param, value)
        cols, sub_rows = run_scenario(sub, threads)
        if header is None:
            header = [param] + cols
        elif header[1:] != cols:
            raise NumericalError(f"{param}={value!r} changes the output columns")
        rows += [[value] + r for r in sub_rows]
    return header or [param], rows


def to_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([fmt(x) for x in r])
    return buf.getvalue()
