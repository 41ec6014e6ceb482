"""Exact simulator for circuits that keep most qubits in a computational basis state.

Every qubit is either classical (a definite bit per row) or active (part of a small
dense amplitude block shared by all rows). A gate on a classical qubit that would
create superposition activates it; after each gate the touched qubits are demoted
again when every row holds them at a definite value (amplitudes below 1e-12 count
as zero). Reversible oracles built from Toffoli-style networks only ever activate a
handful of qubits, so this handles oracles far wider than a dense statevector could.

Written independently of qbridge.simulator; it only reads gate kinds and angles.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from qbridge.circuit import Circuit, GateKind

K = GateKind
EPS = 1e-24  # squared amplitude; anything smaller is float residue
S2 = 1 / math.sqrt(2)


def one_qubit_matrix(kind: GateKind, t: float | None) -> np.ndarray:
    if kind == K.H:
        return np.array([[S2, S2], [S2, -S2]], dtype=complex)
    if kind == K.X:
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if kind == K.Y:
        return np.array([[0, -1j], [1j, 0]])
    if kind == K.Z:
        return np.diag([1, -1]).astype(complex)
    if kind == K.RX:
        c, s = math.cos(t / 2), math.sin(t / 2)
        return np.array([[c, -1j * s], [-1j * s, c]])
    if kind == K.RY:
        c, s = math.cos(t / 2), math.sin(t / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == K.RZ:
        return np.diag([cmath.exp(-0.5j * t), cmath.exp(0.5j * t)])
    if kind == K.P:
        return np.diag([1, cmath.exp(1j * t)])
    raise ValueError(kind)


class BasisSim:
    def __init__(self, width: int, rows: np.ndarray):
        """`rows` is an (R, width) 0/1 array of starting basis states."""
        self.width = width
        self.bits = np.array(rows, dtype=np.uint8)
        self.R = self.bits.shape[0]
        self.active: list[int] = []
        self.amp = np.ones((self.R, 1), dtype=complex)
        self.peak = 0

    # ---- active block management

    def _activate(self, q: int) -> int:
        if q in self.active:
            return self.active.index(q)
        b = self.bits[:, q].astype(bool)[:, None]
        self.amp = np.concatenate([np.where(b, 0, self.amp), np.where(b, self.amp, 0)], axis=1)
        self.active.append(q)
        self.peak = max(self.peak, len(self.active))
        return len(self.active) - 1

    def _try_demote(self, q: int) -> None:
        if q not in self.active:
            return
        i = self.active.index(q)
        a = len(self.active)
        view = self.amp.reshape(self.R, 1 << (a - 1 - i), 2, 1 << i)
        mass1 = (np.abs(view[:, :, 1, :]) ** 2).sum(axis=(1, 2))
        mass0 = (np.abs(view[:, :, 0, :]) ** 2).sum(axis=(1, 2))
        one = mass0 < EPS
        if not np.all(one | (mass1 < EPS)):
            return
        self.bits[:, q] = one
        keep = np.where(one[:, None, None], view[:, :, 1, :], view[:, :, 0, :])
        self.amp = keep.reshape(self.R, 1 << (a - 1))
        del self.active[i]

    def _apply_1q(self, U: np.ndarray, q: int) -> None:
        i = self._activate(q)
        a = len(self.active)
        view = self.amp.reshape(self.R, 1 << (a - 1 - i), 2, 1 << i)
        self.amp = np.einsum("xy,rayb->raxb", U, view).reshape(self.R, 1 << a)

    def _index_map(self, fn) -> tuple[np.ndarray, np.ndarray]:
        """Permutation and phase over the active block from a per-basis-index rule."""
        size = self.amp.shape[1]
        src = np.empty(size, dtype=np.int64)
        phase = np.ones(size, dtype=complex)
        for idx in range(size):
            out, ph = fn(idx)
            src[out] = idx
            phase[out] = ph
        return src, phase

    def _apply_2q(self, kind: GateKind, a: int, b: int, t: float | None) -> None:
        ia, ib = self._activate(a), self._activate(b)
        ma, mb = 1 << ia, 1 << ib

        def rule(idx):
            xa, xb = bool(idx & ma), bool(idx & mb)
            if kind == K.CNOT:
                return (idx ^ mb if xa else idx), 1
            if kind == K.CZ:
                return idx, (-1 if xa and xb else 1)
            if kind == K.CP:
                return idx, (cmath.exp(1j * t) if xa and xb else 1)
            if kind == K.SWAP:
                out = idx & ~(ma | mb) | (mb if xa else 0) | (ma if xb else 0)
                return out, 1
            raise ValueError(kind)

        src, phase = self._index_map(rule)
        self.amp = self.amp[:, src] * phase

    # ---- gate dispatch with classical fast paths

    def apply(self, kind: GateKind, qubits: tuple[int, ...], t: float | None = None) -> None:
        act = self.active
        if len(qubits) == 1:
            (q,) = qubits
            if q not in act:
                col = self.bits[:, q]
                if kind == K.X:
                    col ^= 1
                    return
                if kind in (K.Z, K.P, K.RZ):
                    d = np.diag(one_qubit_matrix(kind, t))
                    self.amp *= np.where(col == 1, d[1], d[0])[:, None]
                    return
                if kind == K.Y:
                    self.amp *= np.where(col == 1, -1j, 1j)[:, None]
                    col ^= 1
                    return
            self._apply_1q(one_qubit_matrix(kind, t), q)
            self._try_demote(q)
            return
        a, b = qubits
        if a not in act and b not in act:
            ca, cb = self.bits[:, a], self.bits[:, b]
            if kind == K.CNOT:
                cb ^= ca
            elif kind == K.CZ:
                self.amp *= np.where(ca & cb, -1, 1)[:, None]
            elif kind == K.CP:
                self.amp *= np.where(ca & cb, cmath.exp(1j * t), 1)[:, None]
            elif kind == K.SWAP:
                self.bits[:, [a, b]] = self.bits[:, [b, a]]
            else:
                raise ValueError(kind)
            return
        self._apply_2q(kind, a, b, t)
        self._try_demote(a)
        self._try_demote(b)

    def run(self, c: Circuit) -> "BasisSim":
        for g in c.ops:
            if g.kind == K.MEASURE:
                continue
            self.apply(g.kind, g.qubits, None if g.param is None else float(g.param))
        return self

    def amplitude_on(self, rows: np.ndarray) -> np.ndarray:
        """Amplitude of each row's state on the given basis state (0 if the classical part differs)."""
        rows = np.asarray(rows, dtype=np.uint8)
        classical = [q for q in range(self.width) if q not in self.active]
        same = np.all(self.bits[:, classical] == rows[:, classical], axis=1)
        idx = np.zeros(self.R, dtype=np.int64)
        for i, q in enumerate(self.active):
            idx |= rows[:, q].astype(np.int64) << i
        return np.where(same, self.amp[np.arange(self.R), idx], 0)


def basis_rows(n_inputs: int, width: int) -> np.ndarray:
    """Every assignment of the first n_inputs qubits, all other qubits zero."""
    x = np.arange(1 << n_inputs, dtype=np.int64)
    rows = np.zeros((x.size, width), dtype=np.uint8)
    for q in range(n_inputs):
        rows[:, q] = (x >> q) & 1
    return rows


def oracle_phases(c: Circuit, n_inputs: int) -> tuple[np.ndarray, float]:
    """Diagonal of the oracle on the inputs with clean ancillas, and the worst leakage."""
    rows = basis_rows(n_inputs, c.num_qubits)
    sim = BasisSim(c.num_qubits, rows).run(c)
    diag = sim.amplitude_on(rows)
    return diag, float(np.max(1 - np.abs(diag)))
