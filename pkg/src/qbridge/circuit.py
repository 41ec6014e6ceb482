"""Gate-level circuit IR and resource metrics."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ContainsMeasurement, InvalidGate, UnboundParameter


class GateKind(str, Enum):
    H = "H"
    X = "X"
    Y = "Y"
    Z = "Z"
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    P = "P"
    CNOT = "CNOT"
    CZ = "CZ"
    CP = "CP"
    SWAP = "SWAP"
    MEASURE = "MEASURE"


ARITY = {
    GateKind.H: 1, GateKind.X: 1, GateKind.Y: 1, GateKind.Z: 1,
    GateKind.RX: 1, GateKind.RY: 1, GateKind.RZ: 1, GateKind.P: 1,
    GateKind.CNOT: 2, GateKind.CZ: 2, GateKind.CP: 2, GateKind.SWAP: 2,
    GateKind.MEASURE: 1,
}
PARAMETRIC = frozenset({GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.P, GateKind.CP})
SELF_INVERSE = frozenset(
    {GateKind.H, GateKind.X, GateKind.Y, GateKind.Z, GateKind.CNOT, GateKind.CZ, GateKind.SWAP}
)


@dataclass(frozen=True)
class Param:
    """Symbolic angle: `scale` times the value bound to `name`."""

    name: str
    scale: float = 1.0

    def __mul__(self, k: float) -> Param:
        return Param(self.name, self.scale * k)

    __rmul__ = __mul__

    def __neg__(self) -> Param:
        return Param(self.name, -self.scale)


Angle = float | Param


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    param: Angle | None = None

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.qubits) != ARITY[kind]:
            raise InvalidGate(f"{kind.value} takes {ARITY[kind]} qubits, got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise InvalidGate(f"{kind.value} operands must be distinct: {self.qubits}")
        if (kind in PARAMETRIC) != (self.param is not None):
            raise InvalidGate(f"{kind.value} parameter mismatch: {self.param!r}")
        if self.param is not None and not isinstance(self.param, Param):
            object.__setattr__(self, "param", float(self.param))

    @property
    def is_symbolic(self) -> bool:
        return isinstance(self.param, Param)

    @property
    def angle(self) -> float:
        if isinstance(self.param, Param):
            raise UnboundParameter(f"gate {self.kind.value} has unbound parameter {self.param.name}")
        return self.param

    def adjoint(self) -> Gate:
        if self.kind == GateKind.MEASURE:
            raise ContainsMeasurement("measurement has no adjoint")
        if self.kind in SELF_INVERSE:
            return self
        if self.kind in PARAMETRIC:
            return Gate(self.kind, self.qubits, -self.param)
        # Y, etc. are self-inverse; all others handled above
        return self


@dataclass
class Circuit:
    num_qubits: int
    ops: list[Gate] = field(default_factory=list)
    parameters: dict[str, int] = field(default_factory=dict)

    # -- building
    def append(self, kind: GateKind | str, qubits: Sequence[int], param: Angle | None = None) -> Circuit:
        g = Gate(GateKind(kind), tuple(qubits), param)
        for q in g.qubits:
            if not 0 <= q < self.num_qubits:
                raise InvalidGate(f"qubit {q} out of range for {self.num_qubits}-qubit circuit")
        if isinstance(g.param, Param) and g.param.name not in self.parameters:
            self.parameters[g.param.name] = len(self.parameters)
        self.ops.append(g)
        return self

    def h(self, q):
        return self.append(GateKind.H, (q,))

    def x(self, q):
        return self.append(GateKind.X, (q,))

    def y(self, q):
        return self.append(GateKind.Y, (q,))

    def z(self, q):
        return self.append(GateKind.Z, (q,))

    def rx(self, q, theta):
        return self.append(GateKind.RX, (q,), theta)

    def ry(self, q, theta):
        return self.append(GateKind.RY, (q,), theta)

    def rz(self, q, theta):
        return self.append(GateKind.RZ, (q,), theta)

    def p(self, q, theta):
        return self.append(GateKind.P, (q,), theta)

    def cx(self, c, t):
        return self.append(GateKind.CNOT, (c, t))

    def cz(self, a, b):
        return self.append(GateKind.CZ, (a, b))

    def cp(self, theta, c, t):
        return self.append(GateKind.CP, (c, t), theta)

    def swap(self, a, b):
        return self.append(GateKind.SWAP, (a, b))

    def measure(self, q):
        return self.append(GateKind.MEASURE, (q,))

    def measure_all(self, qubits: Iterable[int] | None = None):
        for q in range(self.num_qubits) if qubits is None else qubits:
            self.measure(q)
        return self

    def add_gate(self, g: Gate, qubit_map: Sequence[int] | Mapping[int, int] | None = None):
        qs = g.qubits if qubit_map is None else tuple(qubit_map[q] for q in g.qubits)
        return self.append(g.kind, qs, g.param)

    def compose(self, other: Circuit, qubit_map: Sequence[int] | None = None) -> Circuit:
        """Append `other` in place; `qubit_map[i]` is where other's qubit i lands."""
        for g in other.ops:
            self.add_gate(g, qubit_map)
        return self

    def copy(self) -> Circuit:
        return Circuit(self.num_qubits, list(self.ops), dict(self.parameters))

    # -- queries
    def __len__(self) -> int:
        return len(self.ops)

    @property
    def is_parameterized(self) -> bool:
        return any(g.is_symbolic for g in self.ops)

    @property
    def measured_qubits(self) -> list[int]:
        seen: list[int] = []
        for g in self.ops:
            if g.kind == GateKind.MEASURE and g.qubits[0] not in seen:
                seen.append(g.qubits[0])
        return sorted(seen)

    def without_measurements(self) -> Circuit:
        c = Circuit(self.num_qubits, [g for g in self.ops if g.kind != GateKind.MEASURE], dict(self.parameters))
        return c

    def count(self, kind: GateKind | str) -> int:
        k = GateKind(kind)
        return sum(1 for g in self.ops if g.kind == k)

    def bind(self, values: Sequence[float] | Mapping[str, float]) -> Circuit:
        """Substitute every symbolic angle; `values` is a vector ordered by slot or a name map."""
        if isinstance(values, Mapping):
            lookup = dict(values)
        else:
            values = list(np.asarray(values, dtype=float).ravel())
            if len(values) != len(self.parameters):
                raise UnboundParameter(
                    f"expected {len(self.parameters)} parameter values, got {len(values)}"
                )
            lookup = {name: values[slot] for name, slot in self.parameters.items()}
        out = Circuit(self.num_qubits)
        for g in self.ops:
            if isinstance(g.param, Param):
                if g.param.name not in lookup:
                    raise UnboundParameter(f"no value for parameter {g.param.name}")
                out.ops.append(Gate(g.kind, g.qubits, g.param.scale * float(lookup[g.param.name])))
            else:
                out.ops.append(g)
        return out

    def check_terminal_measurements(self) -> None:
        done: set[int] = set()
        for g in self.ops:
            if g.kind == GateKind.MEASURE:
                done.add(g.qubits[0])
            elif done.intersection(g.qubits):
                raise InvalidGate("measurement must be terminal on its qubit")

    # -- text dump
    def dumps(self) -> str:
        lines = [f"qubits {self.num_qubits}"]
        for g in self.ops:
            parts = [g.kind.value, *map(str, g.qubits)]
            if isinstance(g.param, Param):
                parts.append(f"{g.param.scale!r}*{g.param.name}")
            elif g.param is not None:
                parts.append(repr(g.param))
            lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> Circuit:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines or not lines[0].startswith("qubits "):
            raise InvalidGate("circuit dump must start with 'qubits N'")
        c = cls(int(lines[0].split()[1]))
        for ln in lines[1:]:
            tok = ln.split()
            kind = GateKind(tok[0])
            nq = ARITY[kind]
            qubits = [int(t) for t in tok[1 : 1 + nq]]
            param: Angle | None = None
            if kind in PARAMETRIC:
                raw = tok[1 + nq]
                if "*" in raw:
                    scale, name = raw.split("*", 1)
                    param = Param(name, float(scale))
                else:
                    param = float(raw)
            c.append(kind, qubits, param)
        return c


def invert_circuit(c: Circuit) -> Circuit:
    out = Circuit(c.num_qubits)
    for g in reversed(c.ops):
        if g.kind == GateKind.MEASURE:
            raise ContainsMeasurement("cannot invert a circuit containing measurements")
        out.add_gate(g.adjoint())
    return out


@dataclass(frozen=True)
class ResourceMetrics:
    N1: int = 0
    N2: int = 0
    Nm: int = 0
    D1Q: int = 0
    D2Q: int = 0

    def to_json(self) -> dict:
        return {"N1": self.N1, "N2": self.N2, "Nm": self.Nm, "D1Q": self.D1Q, "D2Q": self.D2Q}


def resource_metrics(c: Circuit) -> ResourceMetrics:
    """Counts by arity class plus class-specific ASAP layer depths.

    A gate advances only the counter of its own class. Two-qubit gates also
    synchronize the single-qubit counters of their operands so a later layer on
    either qubit cannot be scheduled before the interaction.
    """
    n1 = n2 = nm = 0
    d1 = [0] * c.num_qubits
    d2 = [0] * c.num_qubits
    for g in c.ops:
        if g.is_symbolic:
            raise UnboundParameter(f"cannot measure resources of unbound parameter {g.param.name}")
        if g.kind == GateKind.MEASURE:
            nm += 1
        elif len(g.qubits) == 1:
            n1 += 1
            d1[g.qubits[0]] += 1
        else:
            n2 += 1
            a, b = g.qubits
            layer = max(d2[a], d2[b]) + 1
            d2[a] = d2[b] = layer
            d1[a] = d1[b] = max(d1[a], d1[b])
    return ResourceMetrics(n1, n2, nm, max(d1, default=0), max(d2, default=0))


# ------------------------------------------------------------ gate matrices

_SQ2 = 1 / np.sqrt(2)


def gate_matrix(kind: GateKind | str, theta: float | None = None) -> np.ndarray:
    """Textbook matrix; two-qubit matrices use the basis |q0 q1> with q0 the first operand."""
    k = GateKind(kind)
    if k == GateKind.H:
        return np.array([[1, 1], [1, -1]], dtype=complex) * _SQ2
    if k == GateKind.X:
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if k == GateKind.Y:
        return np.array([[0, -1j], [1j, 0]], dtype=complex)
    if k == GateKind.Z:
        return np.array([[1, 0], [0, -1]], dtype=complex)
    if k == GateKind.RX:
        c, s = np.cos(theta / 2), np.sin(theta / 2)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if k == GateKind.RY:
        c, s = np.cos(theta / 2), np.sin(theta / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if k == GateKind.RZ:
        return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
    if k == GateKind.P:
        return np.diag([1, np.exp(1j * theta)]).astype(complex)
    if k == GateKind.CNOT:
        return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    if k == GateKind.CZ:
        return np.diag([1, 1, 1, -1]).astype(complex)
    if k == GateKind.CP:
        return np.diag([1, 1, 1, np.exp(1j * theta)]).astype(complex)
    if k == GateKind.SWAP:
        return np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
    raise InvalidGate(f"{k.value} has no unitary matrix")
