"""Entanglement swapping by Bell-basis measurement, and the amplification ladder.

Swapping two pairs that each carry negativity |u|^a and |u|^b leaves the
unmeasured pair with |u|^(a+b), so repeated swapping of identical copies
doubles the exponent each round.  The matrix track simulates this explicitly
(a few levels deep); the deficit track follows it with deficit arithmetic at
any depth.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError
from .quantum import DensityOperator, bell_vector, evolve_ghz, negativity
from .wavepacket import DecoherenceFactor, deficit_pow

MAX_MATRIX_DEPTH = 6
MIN_PROBABILITY = 1e-15


@dataclass(frozen=True)
class SwapOutcome:
    outcome: int
    probability: float
    state: DensityOperator


def swap_once(rho1: DensityOperator, rho2: DensityOperator, outcome: int = 0) -> SwapOutcome:
    """Project B1 B2 of rho1 (A1 B1) x rho2 (A2 B2) onto |Psi^outcome>, keep A1 A2."""
    if rho1.n_qubits != 2 or rho2.n_qubits != 2:
        raise DomainError("swap_once needs two 2-qubit states")
    psi = bell_vector(outcome).reshape(2, 2)  # [b1, b2]
    r1 = rho1.data.reshape(2, 2, 2, 2)  # [a1, b1, a1', b1']
    r2 = rho2.data.reshape(2, 2, 2, 2)  # [a2, b2, a2', b2']
    xi = np.einsum("xy,ixkz,jylw,zw->ijkl", psi.conj(), r1, r2, psi)
    xi = xi.reshape(4, 4)
    p = float(np.trace(xi).real)
    if p < MIN_PROBABILITY:
        raise NumericalError(f"outcome {outcome} has probability {p:.3e}; cannot normalize")
    xi = xi / p
    xi = 0.5 * (xi + xi.conj().T)
    labels = (rho1.qubits[0], rho2.qubits[0])
    if labels[0] == labels[1]:
        labels = ("A1", "A2")
    return SwapOutcome(outcome, p, DensityOperator(xi, labels))


def outcome_equivalence_check(rho1: DensityOperator, rho2: DensityOperator) -> dict:
    """Negativity of the swapped pair for every Bell outcome, and their spread."""
    results = [swap_once(rho1, rho2, i) for i in range(4)]
    negs = [negativity(r.state, 0) for r in results]
    return {
        "probabilities": [r.probability for r in results],
        "negativities": negs,
        "max_difference": max(negs) - min(negs),
    }


@dataclass(frozen=True)
class LadderLevel:
    """One rung: ``n = 2**(level + 1)`` particles consumed per surviving pair.

    ``deficit`` is the deficit-track value 1 - |u|^n.  The matrix-track fields
    are None beyond the matrix depth limit.
    """

    level: int
    n: int
    deficit: float
    negativity_matrix: float | None = None
    deficit_matrix: float | None = None
    probability_error: float | None = None

    @property
    def negativity(self) -> float:
        return 1.0 - self.deficit


def swap_ladder(
    u: DecoherenceFactor, depth: int, matrix: bool = True, outcome: int = 0
) -> list[LadderLevel]:
    """Levels 0..depth of repeated self-swapping, starting from the evolved Bell pair.

    ``probability_error`` is max_i |p_i - 1/4| over the four outcomes.
    """
    if not isinstance(depth, (int, np.integer)) or depth < 0:
        raise DomainError(f"ladder depth must be a non-negative integer, got {depth!r}")
    if matrix and depth > MAX_MATRIX_DEPTH:
        raise DomainError(f"matrix-track ladder depth is limited to {MAX_MATRIX_DEPTH}, got {depth}")
    levels = []
    state = evolve_ghz(2, u, ("A1", "B1")) if matrix else None
    for level in range(depth + 1):
        n = 2 ** (level + 1)
        deficit = deficit_pow(u, n)
        if not matrix:
            levels.append(LadderLevel(level, n, deficit))
            continue
        p_err = None
        if level > 0:
            probs = [swap_once(prev, prev.relabel(("A2", "B2")), i).probability for i in range(4)]
            p_err = max(abs(p - 0.25) for p in probs)
            state = swap_once(prev, prev.relabel(("A2", "B2")), outcome).state.relabel(("A1", "B1"))
        neg = negativity(state, 0)
        levels.append(LadderLevel(level, n, deficit, neg, 1.0 - neg, p_err))
        prev = state
    return levels
