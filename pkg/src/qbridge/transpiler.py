"""Native-basis decomposition and greedy SWAP routing onto coupling maps."""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Iterable

import numpy as np

from .circuit import Circuit, Gate, GateKind, Param, ResourceMetrics, gate_matrix, resource_metrics
from .errors import CircuitTooLarge, TranspileError, UnsupportedBasis

if TYPE_CHECKING:
    from .devices import DeviceRecord

CNOT_BASIS = frozenset({GateKind.RZ, GateKind.RY, GateKind.CNOT})
CZ_BASIS = frozenset({GateKind.RZ, GateKind.RY, GateKind.CZ})

_EPS = 1e-12


@dataclass(frozen=True)
class CouplingMap:
    num_qubits: int
    pairs: frozenset[tuple[int, int]] = frozenset()
    all_to_all: bool = False

    def __post_init__(self):
        canon = frozenset((min(a, b), max(a, b)) for a, b in self.pairs)
        for a, b in canon:
            if a == b or not (0 <= a < self.num_qubits and 0 <= b < self.num_qubits):
                raise ValueError(f"invalid coupling pair ({a},{b})")
        object.__setattr__(self, "pairs", canon)

    @classmethod
    def full(cls, n: int) -> CouplingMap:
        return cls(n, frozenset(), True)

    def allowed(self, a: int, b: int) -> bool:
        return self.all_to_all or (min(a, b), max(a, b)) in self.pairs

    @cached_property
    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.num_qubits)]
        for a, b in sorted(self.pairs):
            adj[a].append(b)
            adj[b].append(a)
        return [sorted(x) for x in adj]

    @cached_property
    def distances(self) -> np.ndarray:
        n = self.num_qubits
        dist = np.full((n, n), -1, dtype=int)
        for s in range(n):
            dist[s, s] = 0
            dq = deque([s])
            while dq:
                u = dq.popleft()
                for v in self.neighbors[u]:
                    if dist[s, v] < 0:
                        dist[s, v] = dist[s, u] + 1
                        dq.append(v)
        return dist

    def shortest_path(self, a: int, b: int) -> list[int]:
        """BFS path; the lowest-index neighbor wins ties."""
        prev = {a: None}
        dq = deque([a])
        while dq:
            u = dq.popleft()
            if u == b:
                break
            for v in self.neighbors[u]:
                if v not in prev:
                    prev[v] = u
                    dq.append(v)
        if b not in prev:
            raise TranspileError(f"physical qubits {a} and {b} are disconnected")
        path = [b]
        while path[-1] != a:
            path.append(prev[path[-1]])
        return path[::-1]


@dataclass
class TranspiledCircuit:
    circuit: Circuit
    layout: dict[int, int]  # logical -> physical at the start
    final_layout: dict[int, int]
    metrics: ResourceMetrics
    swaps: int = 0

    @property
    def qubits_used(self) -> int:
        return len({q for g in self.circuit.ops for q in g.qubits} | set(self.layout.values()))


# ------------------------------------------------------------ decomposition


def _wrap(theta: float) -> float:
    t = math.fmod(theta, 2 * math.pi)
    if t > math.pi:
        t -= 2 * math.pi
    elif t <= -math.pi:
        t += 2 * math.pi
    return t


def zyz_angles(U: np.ndarray) -> tuple[float, float, float]:
    """(phi, theta, lam) with U = e^{ia} RZ(phi) RY(theta) RZ(lam)."""
    V = U / cmath.sqrt(np.linalg.det(U))
    theta = 2 * math.atan2(abs(V[1, 0]), abs(V[0, 0]))
    if abs(V[1, 0]) < 1e-12:
        plus, minus = 2 * cmath.phase(V[1, 1]), 0.0
    elif abs(V[0, 0]) < 1e-12:
        plus, minus = 0.0, 2 * cmath.phase(V[1, 0])
    else:
        plus, minus = 2 * cmath.phase(V[1, 1]), 2 * cmath.phase(V[1, 0])
    phi = (plus + minus) / 2
    lam = (plus - minus) / 2
    return phi, theta, lam


def _emit_euler(out: Circuit, q: int, U: np.ndarray) -> None:
    phi, theta, lam = zyz_angles(U)
    for kind, ang in ((GateKind.RZ, lam), (GateKind.RY, theta), (GateKind.RZ, phi)):
        ang = _wrap(ang)
        if abs(ang) > _EPS:
            out.append(kind, (q,), ang)


def _emit_1q(out: Circuit, g: Gate, basis) -> None:
    q = g.qubits[0]
    if g.kind in basis:
        out.add_gate(g)
        return
    if isinstance(g.param, Param):
        th = g.param
        if g.kind == GateKind.P:
            out.rz(q, th)  # equal up to global phase
        elif g.kind == GateKind.RX:
            out.rz(q, -math.pi / 2)
            out.ry(q, th)
            out.rz(q, math.pi / 2)
        elif g.kind == GateKind.RZ:
            # only reachable if RZ is missing from the basis, which validation forbids
            raise UnsupportedBasis("RZ must be native")
        else:
            raise UnsupportedBasis(f"cannot decompose symbolic {g.kind.value}")
        return
    _emit_euler(out, q, gate_matrix(g.kind, g.param))


def _emit_cnot(out: Circuit, c: int, t: int, basis) -> None:
    if GateKind.CNOT in basis:
        out.cx(c, t)
    else:
        _emit_1q(out, Gate(GateKind.H, (t,)), basis)
        out.cz(c, t)
        _emit_1q(out, Gate(GateKind.H, (t,)), basis)


def _emit_2q(out: Circuit, g: Gate, basis) -> None:
    if g.kind in basis:
        out.add_gate(g)
        return
    a, b = g.qubits
    if g.kind == GateKind.CNOT:
        _emit_cnot(out, a, b, basis)
    elif g.kind == GateKind.CZ:
        _emit_1q(out, Gate(GateKind.H, (b,)), basis)
        out.cx(a, b)
        _emit_1q(out, Gate(GateKind.H, (b,)), basis)
    elif g.kind == GateKind.SWAP:
        _emit_cnot(out, a, b, basis)
        _emit_cnot(out, b, a, basis)
        _emit_cnot(out, a, b, basis)
    elif g.kind == GateKind.CP:
        th = g.param
        half = th * 0.5
        _emit_1q(out, Gate(GateKind.P, (a,), half), basis)
        _emit_cnot(out, a, b, basis)
        _emit_1q(out, Gate(GateKind.P, (b,), -half), basis)
        _emit_cnot(out, a, b, basis)
        _emit_1q(out, Gate(GateKind.P, (b,), half), basis)
    else:  # pragma: no cover
        raise UnsupportedBasis(g.kind.value)


def _check_basis(basis: Iterable[GateKind]) -> frozenset[GateKind]:
    basis = frozenset(GateKind(k) for k in basis)
    if not ({GateKind.RZ, GateKind.RY} <= basis and (GateKind.CNOT in basis or GateKind.CZ in basis)):
        raise UnsupportedBasis(f"basis {sorted(k.value for k in basis)} lacks RZ, RY and CNOT or CZ")
    return basis


def decompose_to_basis(c: Circuit, basis: Iterable[GateKind]) -> Circuit:
    basis = _check_basis(basis)
    out = Circuit(c.num_qubits)
    out.parameters.update(c.parameters)
    for g in c.ops:
        if g.kind == GateKind.MEASURE:
            out.add_gate(g)
        elif len(g.qubits) == 1:
            _emit_1q(out, g, basis)
        else:
            _emit_2q(out, g, basis)
    return out


# ------------------------------------------------------------ routing


def _interactions(c: Circuit) -> tuple[list[int], dict[tuple[int, int], int]]:
    count = [0] * c.num_qubits
    pairs: dict[tuple[int, int], int] = {}
    for g in c.ops:
        if len(g.qubits) == 2:
            a, b = g.qubits
            count[a] += 1
            count[b] += 1
            key = (min(a, b), max(a, b))
            pairs[key] = pairs.get(key, 0) + 1
    return count, pairs


def initial_layout(c: Circuit, cm: CouplingMap) -> dict[int, int]:
    """Greedy placement seeded by the busiest logical qubit on the highest-degree physical qubit.

    Each following logical qubit (most interactions with already placed ones first)
    takes the free physical qubit closest to its placed partners; ties prefer higher
    degree, then the lowest index.
    """
    n = c.num_qubits
    if cm.all_to_all:
        return {q: q for q in range(n)}
    count, pairs = _interactions(c)
    weight = [[0] * n for _ in range(n)]
    for (a, b), w in pairs.items():
        weight[a][b] = weight[b][a] = w
    degree = [len(x) for x in cm.neighbors]
    dist = cm.distances
    far = cm.num_qubits + 1
    layout: dict[int, int] = {}
    free = set(range(cm.num_qubits))
    remaining = set(range(n))
    while remaining:
        placed = list(layout)
        q = min(
            remaining,
            key=lambda l: (-sum(weight[l][p] for p in placed), -count[l], l),
        )
        partners = [p for p in placed if weight[q][p]]
        if not partners:
            # fresh component: stay near what is placed, but prefer well-connected qubits
            def key(ph):
                near = min((dist[ph, layout[p]] if dist[ph, layout[p]] >= 0 else far for p in placed), default=0)
                return (near if count[q] else 0, -degree[ph], ph)
        else:
            def key(ph):
                cost = 0
                for p in partners:
                    d = dist[ph, layout[p]]
                    cost += weight[q][p] * (d if d >= 0 else far)
                return (cost, -degree[ph], ph)
        ph = min(free, key=key)
        layout[q] = ph
        free.discard(ph)
        remaining.discard(q)
    return layout


LOOKAHEAD = 20
LOOKAHEAD_WEIGHT = 0.5


def route(c: Circuit, cm: CouplingMap, layout: dict[int, int] | None = None) -> TranspiledCircuit:
    """Greedy front-layer router.

    Gates run as soon as their qubit predecessors are done and, for two-qubit gates,
    their operands are adjacent. When every pending gate is blocked, the closest
    blocked pair takes one SWAP along its BFS shortest path, moving whichever end
    lowers the distance sum over the blocked front plus a short lookahead window.
    """
    if c.num_qubits > cm.num_qubits:
        raise CircuitTooLarge(f"circuit needs {c.num_qubits} qubits, device has {cm.num_qubits}")
    layout = dict(layout) if layout is not None else initial_layout(c, cm)
    l2p = dict(layout)
    p2l = {p: l for l, p in l2p.items()}
    out = Circuit(cm.num_qubits)
    out.parameters.update(c.parameters)
    swaps = 0
    if cm.all_to_all:
        for g in c.ops:
            out.append(g.kind, tuple(l2p[q] for q in g.qubits), g.param)
        return TranspiledCircuit(out, layout, l2p, _safe_metrics(out), 0)

    dist = cm.distances
    ops = c.ops
    # per-qubit queues of op indices preserve every qubit's gate order
    queues: list[deque[int]] = [deque() for _ in range(c.num_qubits)]
    for i, g in enumerate(ops):
        for q in g.qubits:
            queues[q].append(i)
    done = [False] * len(ops)
    two_q = [i for i, g in enumerate(ops) if len(g.qubits) == 2]
    next_2q = 0  # index into two_q of the first unexecuted two-qubit gate

    def ready(i: int) -> bool:
        return all(queues[q] and queues[q][0] == i for q in ops[i].qubits)

    def execute(i: int) -> None:
        g = ops[i]
        out.append(g.kind, tuple(l2p[q] for q in g.qubits), g.param)
        for q in g.qubits:
            queues[q].popleft()
        done[i] = True

    def do_swap(x: int, y: int) -> None:
        lx, ly = p2l.pop(x, None), p2l.pop(y, None)
        if lx is not None:
            l2p[lx] = y
            p2l[y] = lx
        if ly is not None:
            l2p[ly] = x
            p2l[x] = ly
        out.swap(x, y)

    remaining = len(ops)
    while remaining:
        progressed = True
        while progressed:
            progressed = False
            heads = sorted({queues[q][0] for q in range(c.num_qubits) if queues[q]})
            for i in heads:
                if done[i] or not ready(i):
                    continue
                g = ops[i]
                if len(g.qubits) == 2 and not cm.allowed(l2p[g.qubits[0]], l2p[g.qubits[1]]):
                    continue
                execute(i)
                remaining -= 1
                progressed = True
        if not remaining:
            break
        blocked = sorted({queues[q][0] for q in range(c.num_qubits) if queues[q] and ready(queues[q][0])})
        if not blocked:  # pragma: no cover - a ready gate always exists in a DAG
            raise TranspileError("router deadlock")
        while next_2q < len(two_q) and done[two_q[next_2q]]:
            next_2q += 1
        window = [i for i in two_q[next_2q : next_2q + LOOKAHEAD + len(blocked)] if i not in blocked][:LOOKAHEAD]

        def cost(front: list[int], ahead: list[int]) -> float:
            f = sum(dist[l2p[ops[i].qubits[0]], l2p[ops[i].qubits[1]]] for i in front)
            a = sum(dist[l2p[ops[i].qubits[0]], l2p[ops[i].qubits[1]]] for i in ahead)
            return f + LOOKAHEAD_WEIGHT * a / max(len(ahead), 1)

        target = min(blocked, key=lambda i: (dist[l2p[ops[i].qubits[0]], l2p[ops[i].qubits[1]]], i))
        pa, pb = l2p[ops[target].qubits[0]], l2p[ops[target].qubits[1]]
        path = cm.shortest_path(pa, pb)
        options = sorted({(path[0], path[1]), (path[-2], path[-1])})
        best = None
        for x, y in options:
            do_swap(x, y)
            score = (cost(blocked, window), x, y)
            do_swap(x, y)  # undo
            out.ops.pop()
            out.ops.pop()
            if best is None or score < best:
                best = score
        do_swap(best[1], best[2])
        swaps += 1
    return TranspiledCircuit(out, layout, l2p, _safe_metrics(out), swaps)


LAYOUT_ROUNDS = 3


def refine_layout(c: Circuit, cm: CouplingMap, rounds: int = LAYOUT_ROUNDS) -> TranspiledCircuit:
    """Route forward, then improve the starting layout with reverse passes.

    Routing the reversed circuit from a forward pass's final layout ends on a layout
    that suits the start of the circuit. Rounds stop once the SWAP count stops falling.
    """
    best = route(c, cm)
    if cm.all_to_all or rounds <= 0:
        return best
    rev = Circuit(c.num_qubits)
    for g in reversed(c.ops):
        if g.kind is not GateKind.MEASURE:
            rev.append(g.kind, g.qubits, g.param)
    for _ in range(rounds):
        back = route(rev, cm, best.final_layout)
        fwd = route(c, cm, back.final_layout)
        if fwd.swaps >= best.swaps:
            break
        best = fwd
    return best


def _safe_metrics(c: Circuit) -> ResourceMetrics:
    return ResourceMetrics() if c.is_parameterized else resource_metrics(c)


def device_basis(device: DeviceRecord) -> frozenset[GateKind]:
    return device.basis


def transpile(c: Circuit, device: DeviceRecord) -> TranspiledCircuit:
    cm = device.coupling
    if c.num_qubits > cm.num_qubits:
        raise CircuitTooLarge(
            f"circuit needs {c.num_qubits} qubits, {device.name} has {cm.num_qubits}"
        )
    basis = device.basis
    native = decompose_to_basis(c, basis)
    routed = refine_layout(native, cm)
    final = decompose_to_basis(routed.circuit, basis)
    return TranspiledCircuit(final, routed.layout, routed.final_layout, _safe_metrics(final), routed.swaps)


def check_legal(t: TranspiledCircuit, cm: CouplingMap, basis: Iterable[GateKind]) -> list[str]:
    """Violations of coupling or basis constraints (empty when legal)."""
    basis = frozenset(basis) | {GateKind.MEASURE}
    problems = []
    for g in t.circuit.ops:
        if g.kind not in basis:
            problems.append(f"{g.kind.value} not in basis")
        if len(g.qubits) == 2 and not cm.allowed(*g.qubits):
            problems.append(f"{g.kind.value} on disallowed pair {g.qubits}")
    return problems
