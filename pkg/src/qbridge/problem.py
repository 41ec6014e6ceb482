"""Problem taxonomy and validated instance data."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import IntEnum

from .errors import MalformedGraph, OperandOverflow, TagDataMismatch


class ProblemTag(IntEnum):
    MAXCUT = 0
    MIS = 1
    TSP = 2
    CLIQUE = 3
    KCOLOR = 4
    VERTEX_COVER = 5
    FACTORIZATION = 6
    ADD = 7
    MUL = 8
    SUB = 9
    UNKNOWN = -1

    @property
    def display(self) -> str:
        return _DISPLAY[self]


_DISPLAY = {
    ProblemTag.MAXCUT: "MaxCut",
    ProblemTag.MIS: "MIS",
    ProblemTag.TSP: "TSP",
    ProblemTag.CLIQUE: "Clique",
    ProblemTag.KCOLOR: "KColor",
    ProblemTag.VERTEX_COVER: "VertexCover",
    ProblemTag.FACTORIZATION: "Factorization",
    ProblemTag.ADD: "Add",
    ProblemTag.MUL: "Mul",
    ProblemTag.SUB: "Sub",
    ProblemTag.UNKNOWN: "Unknown",
}

GRAPH_TAGS = frozenset(
    {ProblemTag.MAXCUT, ProblemTag.MIS, ProblemTag.TSP, ProblemTag.CLIQUE,
     ProblemTag.KCOLOR, ProblemTag.VERTEX_COVER}
)
ARITH_TAGS = frozenset({ProblemTag.ADD, ProblemTag.MUL, ProblemTag.SUB})
K_TAGS = frozenset({ProblemTag.CLIQUE, ProblemTag.KCOLOR, ProblemTag.VERTEX_COVER})


@dataclass(frozen=True)
class GraphData:
    node_count: int
    edges: tuple[tuple[int, int, float], ...]
    k: int | None = None

    @classmethod
    def from_edges(cls, edges, node_count: int | None = None, k: int | None = None) -> GraphData:
        """Build from (u, v) or (u, v, w) items; edges are canonicalized to u < v."""
        canon = []
        for e in edges:
            if len(e) not in (2, 3):
                raise MalformedGraph(f"edge {e!r} must have 2 or 3 entries")
            u, v = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) == 3 else 1.0
            canon.append((min(u, v), max(u, v), w))
        if node_count is None:
            node_count = 1 + max((max(u, v) for u, v, _ in canon), default=-1)
        return cls(node_count, tuple(sorted(canon)), k)

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.node_count)]
        for u, v, _ in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def weight_matrix(self) -> list[list[float]]:
        n = self.node_count
        w = [[0.0] * n for _ in range(n)]
        for u, v, wt in self.edges:
            w[u][v] = w[v][u] = wt
        return w

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency()), default=0)


@dataclass(frozen=True)
class ArithmeticOperands:
    a: int
    b: int
    width_a: int
    width_b: int
    width_c: int | None = None

    @classmethod
    def auto(cls, tag: ProblemTag, a: int, b: int, width_a=None, width_b=None, width_c=None):
        """Default widths leave room for the exact result of a + b, b - a, or a * b."""
        base = max(int(a).bit_length(), int(b).bit_length(), 1)
        if tag == ProblemTag.MUL:
            wa = width_a or max(int(a).bit_length(), 1)
            wb = width_b or max(int(b).bit_length(), 1)
            return cls(a, b, wa, wb, width_c or wa + wb)
        return cls(a, b, width_a or base + 1, width_b or base + 1, width_c)

    @property
    def product_width(self) -> int:
        return self.width_c if self.width_c is not None else self.width_a + self.width_b


@dataclass(frozen=True)
class ProblemInstance:
    tag: ProblemTag
    data: GraphData | ArithmeticOperands | int | None = field(default=None)

    @property
    def graph(self) -> GraphData:
        assert isinstance(self.data, GraphData)
        return self.data


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 64-bit inputs."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _validate_graph(tag: ProblemTag, g: GraphData) -> None:
    if g.node_count < 0:
        raise MalformedGraph("node_count must be non-negative")
    seen = set()
    for u, v, w in g.edges:
        if not (0 <= u < g.node_count and 0 <= v < g.node_count):
            raise MalformedGraph(f"edge ({u},{v}) out of range for {g.node_count} nodes")
        if u == v:
            raise MalformedGraph(f"self-loop on vertex {u}")
        if u > v:
            raise MalformedGraph(f"edge ({u},{v}) not canonical")
        if (u, v) in seen:
            raise MalformedGraph(f"duplicate edge ({u},{v})")
        seen.add((u, v))
        if not math.isfinite(w):
            raise MalformedGraph(f"edge ({u},{v}) has non-finite weight")
        if w < 0:
            raise MalformedGraph(f"edge ({u},{v}) has negative weight")
    if tag in K_TAGS:
        if g.k is None:
            raise TagDataMismatch(f"{tag.display} requires parameter k")
        if g.k < 1:
            raise TagDataMismatch("k must be positive")
    if tag == ProblemTag.TSP and g.node_count < 2:
        raise MalformedGraph("TSP needs at least 2 cities")


def validate_instance(inst: ProblemInstance) -> ProblemInstance:
    tag, data = inst.tag, inst.data
    if tag == ProblemTag.UNKNOWN:
        raise TagDataMismatch("Unknown tag carries no data and cannot be processed")
    if tag in GRAPH_TAGS:
        if not isinstance(data, GraphData):
            raise TagDataMismatch(f"{tag.display} expects graph data")
        _validate_graph(tag, data)
    elif tag in ARITH_TAGS:
        if not isinstance(data, ArithmeticOperands):
            raise TagDataMismatch(f"{tag.display} expects arithmetic operands")
        if min(data.width_a, data.width_b, data.product_width) < 1:
            raise OperandOverflow("register widths must be at least 1")
        if data.a < 0 or data.b < 0:
            raise OperandOverflow("operands must be non-negative")
        if data.a >= 1 << data.width_a:
            raise OperandOverflow(f"a={data.a} does not fit in {data.width_a} bits")
        if data.b >= 1 << data.width_b:
            raise OperandOverflow(f"b={data.b} does not fit in {data.width_b} bits")
        if tag == ProblemTag.MUL and data.width_c is None:
            # pin the product register so equal instances compare equal
            return ProblemInstance(tag, replace(data, width_c=data.product_width))
    else:
        if isinstance(data, bool) or not isinstance(data, int):
            raise TagDataMismatch("Factorization expects an integer N")
        if data < 4:
            raise TagDataMismatch("N must be at least 4")
        if is_prime(data):
            raise TagDataMismatch(f"N={data} is prime")
    return inst
