"""Density-operator algebra for N spin qubits.

Qubit ordering: tensor factors read left to right map to basis-index bits from
most to least significant, so for qubits (A, B) the basis order is
|00>, |01>, |10>, |11> with A the high bit.

The momentum-averaged Wigner rotation acts on each spin as the channel E
defined by its images of the four matrix units R^{jk} = |j><k|; the channel is
stored by (c_bar, s_bar) only.  Two computation tracks exist:

* the *matrix* track builds explicit density operators (trustworthy while
  deficits stay well above double-precision rounding, ~1e-14);
* the *deficit* track evaluates the closed forms from the deficit 1 - |u_bar|
  and remains exact at realistic wave amplitudes.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DomainError, NumericalError, PositivityError
from .wavepacket import DecoherenceFactor, deficit_sq

MAX_QUBITS = 10
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
NEGATIVE_EIG_TOL = 1e-10

# Pauli matrices sigma^0..sigma^3
PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, unit-trace operator on ``len(qubits)`` qubits (data is read-only)."""

    data: np.ndarray
    qubits: tuple[str, ...]

    def __post_init__(self):
        data = np.array(self.data, dtype=complex)
        qubits = tuple(str(q) for q in self.qubits)
        n = len(qubits)
        if len(set(qubits)) != n or n == 0:
            raise DomainError(f"qubit labels must be unique and nonempty: {qubits}")
        if data.shape != (2**n, 2**n):
            raise DomainError(f"expected {2**n}x{2**n} matrix for {n} qubits, got {data.shape}")
        herm_err = float(np.max(np.abs(data - data.conj().T)))
        if herm_err > HERMITIAN_TOL:
            raise DomainError(f"operator not Hermitian (max |rho - rho^dag| = {herm_err:.3e})")
        tr = complex(np.trace(data))
        if abs(tr - 1.0) > TRACE_TOL:
            raise DomainError(f"trace must be 1, got {tr}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "qubits", qubits)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    def index(self, label) -> int:
        if isinstance(label, (int, np.integer)) and not isinstance(label, bool):
            if not 0 <= label < self.n_qubits:
                raise DomainError(f"qubit index {label} out of range")
            return int(label)
        try:
            return self.qubits.index(str(label))
        except ValueError:
            raise DomainError(f"unknown qubit {label!r}; have {self.qubits}") from None

    def eigenvalues(self) -> np.ndarray:
        return herm_eigenvalues(self.data)

    def check_positive(self) -> np.ndarray:
        ev = self.eigenvalues()
        if ev[0] < -NEGATIVE_EIG_TOL:
            raise PositivityError(f"eigenvalue {ev[0]:.3e} below -{NEGATIVE_EIG_TOL}")
        return ev

    def relabel(self, qubits: Sequence[str]) -> DensityOperator:
        return DensityOperator(self.data, tuple(qubits))

    def to_json(self) -> str:
        flat = self.data.ravel()
        return json.dumps(
            {
                "dim": self.dim,
                "qubits": list(self.qubits),
                "re": [float(x) for x in flat.real],
                "im": [float(x) for x in flat.imag],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> DensityOperator:
        doc = json.loads(text)
        extra = set(doc) - {"dim", "qubits", "re", "im"}
        if extra:
            raise DomainError(f"unknown fields in density-operator document: {sorted(extra)}")
        dim = int(doc["dim"])
        re = np.asarray(doc["re"], dtype=float)
        im = np.asarray(doc["im"], dtype=float)
        if re.size != dim * dim or im.size != dim * dim:
            raise DomainError("re/im arrays must hold dim*dim row-major entries")
        return cls((re + 1j * im).reshape(dim, dim), tuple(doc["qubits"]))


def _labels(n: int, prefix: str = "A") -> tuple[str, ...]:
    return tuple(f"{prefix}{i + 1}" for i in range(n))


def _check_n(n: int) -> None:
    if not (isinstance(n, (int, np.integer)) and 1 <= n <= MAX_QUBITS):
        raise DomainError(f"particle count must be an integer in [1, {MAX_QUBITS}], got {n!r}")


def basis_op(j: int, k: int) -> np.ndarray:
    """Matrix unit R^{jk} = |j><k|."""
    if j not in (0, 1) or k not in (0, 1):
        raise DomainError(f"R^{{jk}} needs j, k in {{0, 1}}, got ({j}, {k})")
    r = np.zeros((2, 2), dtype=complex)
    r[j, k] = 1.0
    return r


def channel_table(u: DecoherenceFactor, j: int, k: int) -> np.ndarray:
    """E[R^{jk}] for the rotation-averaged channel with u_bar = c_bar + i s_bar."""
    c, s = u.c_bar, u.s_bar
    table = {
        (0, 0): [[1 + c, s], [s, 1 - c]],
        (0, 1): [[-s, 1 + c], [-1 + c, s]],
        (1, 0): [[-s, -1 + c], [1 + c, s]],
        (1, 1): [[1 - c, -s], [-s, 1 + c]],
    }
    try:
        return 0.5 * np.array(table[(j, k)], dtype=complex)
    except KeyError:
        raise DomainError(f"R^{{jk}} needs j, k in {{0, 1}}, got ({j}, {k})") from None


def channel_tensor(u: DecoherenceFactor) -> np.ndarray:
    """E[j, k] -> 2x2 image, as a (2, 2, 2, 2) array indexed [j, k, a, b]."""
    return np.array([[channel_table(u, j, k) for k in (0, 1)] for j in (0, 1)])


def apply_channel_matrix(u: DecoherenceFactor, op: np.ndarray, target: int, n: int) -> np.ndarray:
    """Apply E to qubit ``target`` of an arbitrary 2^n x 2^n operator (linear extension)."""
    t = np.asarray(op, dtype=complex).reshape((2,) * (2 * n))
    out = np.tensordot(t, channel_tensor(u), axes=([target, n + target], [0, 1]))
    out = np.moveaxis(out, [2 * n - 2, 2 * n - 1], [target, n + target])
    return out.reshape(2**n, 2**n)


def apply_channel(u: DecoherenceFactor, rho: DensityOperator, target) -> DensityOperator:
    i = rho.index(target)
    return DensityOperator(apply_channel_matrix(u, rho.data, i, rho.n_qubits), rho.qubits)


def _projector(psi: np.ndarray, qubits) -> DensityOperator:
    return DensityOperator(np.outer(psi, psi.conj()), qubits)


def bell_vector(i: int) -> np.ndarray:
    """|Psi^i> = (sigma^i x sigma^0)|Psi^0>, |Psi^0> = (|00> + |11>)/sqrt 2."""
    if i not in (0, 1, 2, 3):
        raise DomainError(f"Bell index must be 0..3, got {i!r}")
    psi0 = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    return np.kron(PAULI[i], PAULI[0]) @ psi0


def bell_state(i: int = 0, qubits=("A", "B")) -> DensityOperator:
    return _projector(bell_vector(i), qubits)


def ghz(n: int, qubits=None) -> DensityOperator:
    """Explicit projector onto (|0...0> + |1...1>)/sqrt 2."""
    _check_n(n)
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = psi[-1] = 1 / math.sqrt(2)
    return _projector(psi, qubits or _labels(n))


def _kron_all(mats: Iterable[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, mats)


def ghz_from_units(n: int, qubits=None) -> DensityOperator:
    """GHZ built as 1/2 sum_jk (R^{jk})^{(x)n}."""
    _check_n(n)
    data = 0.5 * sum(_kron_all([basis_op(j, k)] * n) for j in (0, 1) for k in (0, 1))
    return DensityOperator(data, qubits or _labels(n))


def evolve_ghz(n: int, u: DecoherenceFactor, qubits=None) -> DensityOperator:
    """1/2 sum_jk E[R^{jk}] (x) ... (x) E[R^{jk}] (n factors)."""
    _check_n(n)
    data = 0.5 * sum(_kron_all([channel_table(u, j, k)] * n) for j in (0, 1) for k in (0, 1))
    return DensityOperator(data, qubits or _labels(n))


def evolve_single(u: DecoherenceFactor) -> DensityOperator:
    """Spin initially |0><0| after the channel."""
    return DensityOperator(channel_table(u, 0, 0), ("A",))


def herm_eigenvalues(m: np.ndarray, check_backward: bool = True) -> np.ndarray:
    """Ascending real spectrum of a Hermitian matrix.

    Raises NumericalError if the eigen-decomposition's backward error
    ||M v - eta v|| exceeds 1e-10 ||M||.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if np.max(np.abs(m - m.conj().T), initial=0.0) > 1e-10 * scale:
        raise DomainError("matrix is not Hermitian")
    if not check_backward:
        return np.linalg.eigvalsh(m)
    evals, vecs = np.linalg.eigh(m)
    norm = np.linalg.norm(m, 2) if m.size else 0.0
    resid = np.linalg.norm(m @ vecs - vecs * evals, axis=0)
    if resid.size and resid.max() > 1e-10 * max(norm, 1e-300):
        raise NumericalError(f"eigensolver backward error {resid.max():.3e} too large")
    return evals


def _entropy_from_spectrum(evals: np.ndarray) -> float:
    if evals[0] < -NEGATIVE_EIG_TOL:
        raise PositivityError(f"eigenvalue {evals[0]:.3e} below -{NEGATIVE_EIG_TOL}")
    p = evals[evals > 0.0]
    # an eigenvalue a hair above 1 would otherwise give a tiny negative entropy
    return max(float(-np.sum(p * np.log2(p))), 0.0)


def von_neumann_entropy(rho) -> float:
    """-tr rho log2 rho in bits; eigenvalues in [-1e-10, 0) count as zero."""
    data = rho.data if isinstance(rho, DensityOperator) else rho
    return _entropy_from_spectrum(herm_eigenvalues(data))


def binary_entropy(p: float) -> float:
    """-p log2 p - (1-p) log2(1-p), accurate for tiny p."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability must lie in [0, 1], got {p!r}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return (-p * math.log(p) - (1.0 - p) * math.log1p(-p)) / math.log(2.0)


def _subset_indices(rho: DensityOperator, subset) -> list[int]:
    if isinstance(subset, (str, int, np.integer)):
        subset = [subset]
    idx = sorted({rho.index(s) for s in subset})
    if not idx or len(idx) >= rho.n_qubits:
        raise DomainError(f"bipartition subset must be a nonempty proper subset, got {subset!r}")
    return idx


def partial_transpose(rho: DensityOperator, subset) -> np.ndarray:
    """Transpose the row/column indices of the chosen qubits."""
    n = rho.n_qubits
    idx = _subset_indices(rho, subset)
    t = rho.data.reshape((2,) * (2 * n))
    axes = list(range(2 * n))
    for i in idx:
        axes[i], axes[n + i] = axes[n + i], axes[i]
    return np.ascontiguousarray(t.transpose(axes)).reshape(rho.dim, rho.dim)


def negativity(rho: DensityOperator, subset=0) -> float:
    """-2 x (sum of negative eigenvalues of the partial transpose), floored at 0."""
    evals = herm_eigenvalues(partial_transpose(rho, subset))
    return max(-2.0 * float(np.sum(evals[evals < 0.0])), 0.0)


def bipartitions(n: int) -> list[tuple[int, ...]]:
    """One representative subset per bipartition (the side holding qubit 0)."""
    out = []
    for size in range(1, n):
        for rest in itertools.combinations(range(1, n), size - 1):
            out.append((0, *rest))
    return out


def bipartition_negativities(rho: DensityOperator) -> dict[tuple[str, ...], float]:
    return {
        tuple(rho.qubits[i] for i in part): negativity(rho, part)
        for part in bipartitions(rho.n_qubits)
    }


class TwoParticleResult(NamedTuple):
    entropy: float
    negativity: float
    negativity_deficit: float


def analytic_two_particle(d: DecoherenceFactor | float) -> TwoParticleResult:
    """Deficit-track entropy and negativity of the evolved Bell pair."""
    e = deficit_sq(d)
    return TwoParticleResult(binary_entropy(0.5 * e), 1.0 - e, e)


def analytic_single_particle(d: DecoherenceFactor | float) -> float:
    """Deficit-track spin entropy of one particle: h((1 - |u_bar|)/2)."""
    delta = d.deficit if isinstance(d, DecoherenceFactor) else float(d)
    return binary_entropy(0.5 * delta)
