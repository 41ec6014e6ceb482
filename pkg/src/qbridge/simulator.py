"""Dense statevector simulation, shot sampling and Ising expectations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .circuit import Circuit, Gate, GateKind, gate_matrix
from .errors import LengthMismatch, TooManyQubits, UnboundParameter
from .qcf import IsingModel, ising_energy

DEFAULT_MAX_QUBITS = 24


@dataclass(frozen=True)
class StateVector:
    n: int
    amplitudes: np.ndarray

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.probabilities())))


@dataclass(frozen=True)
class Counts:
    counts: dict[str, int]
    shots: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts must sum to shots")

    @property
    def width(self) -> int:
        return len(next(iter(self.counts))) if self.counts else 0

    def most_common(self, k: int | None = None) -> list[tuple[str, int]]:
        items = sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return items if k is None else items[:k]

    def probability(self, bitstring: str) -> float:
        return self.counts.get(bitstring, 0) / self.shots


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


# ------------------------------------------------------------ gate kernels
#
# The state lives in an array of shape (2**n, batch) with qubit q as bit q of
# the row index, so a reshape to (high, 2, low*batch) isolates qubit q.


def _view1(psi: np.ndarray, n: int, q: int) -> np.ndarray:
    return psi.reshape(1 << (n - q - 1), 2, -1)


def _view2(psi: np.ndarray, n: int, a: int, b: int):
    lo, hi = (a, b) if a < b else (b, a)
    v = psi.reshape(1 << (n - hi - 1), 2, 1 << (hi - lo - 1), 2, -1)
    return v, (a > b)  # flag: first operand is the high axis


def _sel(v, a_bit: int, b_bit: int, a_is_hi: bool):
    # returns a view with given operand bits; axes 1 and 3 are hi and lo
    if a_is_hi:
        return v[:, a_bit, :, b_bit, :]
    return v[:, b_bit, :, a_bit, :]


def apply_gate(psi: np.ndarray, n: int, g: Gate) -> None:
    """Apply one bound unitary gate in place."""
    k = g.kind
    if k == GateKind.MEASURE:
        return
    if g.is_symbolic:
        raise UnboundParameter(f"unbound parameter {g.param.name}")
    if len(g.qubits) == 1:
        v = _view1(psi, n, g.qubits[0])
        if k == GateKind.X:
            v[:, [0, 1], :] = v[:, [1, 0], :]
        elif k == GateKind.Z:
            v[:, 1, :] *= -1
        elif k == GateKind.P:
            v[:, 1, :] *= np.exp(1j * g.param)
        elif k == GateKind.RZ:
            v[:, 0, :] *= np.exp(-0.5j * g.param)
            v[:, 1, :] *= np.exp(0.5j * g.param)
        else:
            U = gate_matrix(k, g.param)
            a0 = v[:, 0, :].copy()
            a1 = v[:, 1, :].copy()
            v[:, 0, :] = U[0, 0] * a0 + U[0, 1] * a1
            v[:, 1, :] = U[1, 0] * a0 + U[1, 1] * a1
        return
    a, b = g.qubits
    v, a_hi = _view2(psi, n, a, b)
    if k == GateKind.CNOT:
        s0 = _sel(v, 1, 0, a_hi)
        s1 = _sel(v, 1, 1, a_hi)
        tmp = s0.copy()
        s0[...] = s1
        s1[...] = tmp
    elif k == GateKind.CZ:
        _sel(v, 1, 1, a_hi)[...] *= -1
    elif k == GateKind.CP:
        _sel(v, 1, 1, a_hi)[...] *= np.exp(1j * g.param)
    elif k == GateKind.SWAP:
        s01 = _sel(v, 0, 1, a_hi)
        s10 = _sel(v, 1, 0, a_hi)
        tmp = s01.copy()
        s01[...] = s10
        s10[...] = tmp
    else:  # pragma: no cover - all two-qubit kinds handled above
        raise ValueError(k)


def evolve(psi: np.ndarray, c: Circuit) -> np.ndarray:
    """Apply every unitary of a bound circuit to a (2**n,) or (2**n, batch) array in place."""
    for g in c.ops:
        apply_gate(psi, c.num_qubits, g)
    return psi


def run_statevector(
    c: Circuit,
    bindings: Sequence[float] | Mapping[str, float] | None = None,
    max_qubits: int = DEFAULT_MAX_QUBITS,
    initial: np.ndarray | None = None,
) -> StateVector:
    if c.num_qubits > max_qubits:
        raise TooManyQubits(f"{c.num_qubits} qubits exceeds the simulator cap of {max_qubits}")
    if bindings is not None:
        c = c.bind(bindings)
    elif c.is_parameterized:
        raise UnboundParameter("circuit has unbound parameters")
    dim = 1 << c.num_qubits
    if initial is None:
        psi = np.zeros(dim, dtype=complex)
        psi[0] = 1.0
    else:
        psi = np.array(initial, dtype=complex).reshape(dim)
    evolve(psi, c)
    return StateVector(c.num_qubits, psi)


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Full matrix by evolving every basis state at once (column j = image of |j>)."""
    dim = 1 << c.num_qubits
    psi = np.eye(dim, dtype=complex)
    evolve(psi, c)
    return psi


# ------------------------------------------------------------ measurement


def marginal_probabilities(s: StateVector, measured: Sequence[int]) -> np.ndarray:
    measured = sorted(measured)
    p = s.probabilities()
    idx = np.arange(p.size)
    key = np.zeros(p.size, dtype=np.int64)
    for pos, q in enumerate(measured):
        key |= ((idx >> q) & 1) << pos
    return np.bincount(key, weights=p, minlength=1 << len(measured))


def sample_counts(s: StateVector, measured: Iterable[int] | None, shots: int, rng=None) -> Counts:
    if shots < 1:
        raise ValueError("shots must be at least 1")
    measured = sorted(range(s.n) if measured is None else measured)
    probs = marginal_probabilities(s, measured)
    probs = np.clip(probs, 0, None)
    probs = probs / probs.sum()
    hits = _rng(rng).multinomial(shots, probs)
    m = len(measured)
    counts = {format(i, f"0{m}b") if m else "": int(c) for i, c in enumerate(hits) if c}
    return Counts(counts, shots)


def bitstring_to_spins(x: str) -> np.ndarray:
    # qubit 0 is the rightmost character
    return np.array([1.0 if ch == "1" else -1.0 for ch in reversed(x)])


def expectation_ising(counts: Counts, m: IsingModel) -> float:
    total = 0.0
    for x, c in counts.counts.items():
        if len(x) != m.n:
            raise LengthMismatch(f"bitstring {x!r} has length {len(x)}, model has {m.n} spins")
        total += c * ising_energy(m, bitstring_to_spins(x))
    return total / counts.shots


def exact_expectation_ising(s: StateVector, m: IsingModel, measured: Sequence[int] | None = None) -> float:
    from .qcf import ising_energies_all

    measured = list(range(m.n)) if measured is None else measured
    p = marginal_probabilities(s, measured)
    return float(np.dot(p, ising_energies_all(m)))
