"""Quantum-compatible formats: QUBO, Ising, CNF oracles and arithmetic encodings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import LengthMismatch, NonSpinValue, UnsupportedTag, TooManyVariables
from .problem import (
    ARITH_TAGS,
    ArithmeticOperands,
    GraphData,
    ProblemInstance,
    ProblemTag,
)

QUBO_TAGS = frozenset(
    {ProblemTag.MAXCUT, ProblemTag.MIS, ProblemTag.TSP, ProblemTag.CLIQUE,
     ProblemTag.KCOLOR, ProblemTag.VERTEX_COVER}
)
ORACLE_TAGS = frozenset(
    {ProblemTag.MIS, ProblemTag.CLIQUE, ProblemTag.KCOLOR,
     ProblemTag.VERTEX_COVER, ProblemTag.FACTORIZATION}
)

# Largest factorization target whose divisor register is compiled by enumeration.
MAX_FACTOR_N = 1 << 20


@dataclass(frozen=True)
class PenaltyWeights:
    A: float = 2.0
    B: float = 1.0


@dataclass(frozen=True)
class QuboQcf:
    n: int
    Q: np.ndarray
    var_map: tuple[Any, ...]

    def __post_init__(self):
        Q = np.asarray(self.Q, dtype=float)
        if Q.shape != (self.n, self.n):
            raise ValueError(f"Q must be {self.n}x{self.n}")
        if np.any(np.tril(Q, -1)):
            raise ValueError("Q must be upper-triangular")
        Q.setflags(write=False)
        object.__setattr__(self, "Q", Q)

    def to_json(self) -> dict:
        return {"n": self.n, "Q": self.Q.tolist(), "var_map": [list(v) if isinstance(v, tuple) else v for v in self.var_map]}


@dataclass(frozen=True)
class IsingModel:
    n: int
    J: dict[tuple[int, int], float]
    h: tuple[float, ...]
    offset: float = 0.0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "J": [[i, j, v] for (i, j), v in sorted(self.J.items())],
            "h": list(self.h),
            "offset": self.offset,
        }


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for cl in self.clauses:
            if not cl:
                raise ValueError("empty clause")
            for lit in cl:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range")

    def evaluate(self, assignment: int) -> bool:
        """Assignment as an integer: variable i+1 is bit i."""
        return all(
            any(((assignment >> (abs(l) - 1)) & 1) == (l > 0) for l in cl)
            for cl in self.clauses
        )

    def satisfying_mask(self) -> np.ndarray:
        """Boolean array over all 2^num_vars assignments."""
        idx = np.arange(1 << self.num_vars)
        ok = np.ones(idx.shape, dtype=bool)
        for cl in self.clauses:
            sat = np.zeros(idx.shape, dtype=bool)
            for lit in cl:
                bit = (idx >> (abs(lit) - 1)) & 1
                sat |= bit == (1 if lit > 0 else 0)
            ok &= sat
        return ok


@dataclass(frozen=True)
class OracleQcf:
    formula: CnfFormula
    var_map: tuple[Any, ...] = ()

    @property
    def input_qubits(self) -> int:
        return self.formula.num_vars


@dataclass(frozen=True)
class ArithmeticQcf:
    op: ProblemTag
    operands: ArithmeticOperands
    encoding: str = "qft"  # "qft" or "reversible"

    def expected(self) -> int:
        o = self.operands
        if self.op == ProblemTag.ADD:
            return (o.b + o.a) % (1 << o.width_b)
        if self.op == ProblemTag.SUB:
            return (o.b - o.a) % (1 << o.width_b)
        return (o.a * o.b) % (1 << o.product_width)


# ---------------------------------------------------------------- QUBO


class _QuboBuilder:
    def __init__(self, n: int):
        self.Q = np.zeros((n, n))

    def lin(self, i: int, c: float):
        self.Q[i, i] += c

    def quad(self, i: int, j: int, c: float):
        if i == j:
            # x_i^2 = x_i for binaries
            self.Q[i, i] += c
        else:
            self.Q[min(i, j), max(i, j)] += c

    def one_hot(self, idx: Sequence[int], A: float, target: int = 1):
        # A * (target - sum x)^2, constant dropped
        for i in idx:
            self.lin(i, A * (1 - 2 * target))
        for i, j in itertools.combinations(idx, 2):
            self.quad(i, j, 2 * A)


def clique_penalty(g: GraphData, w: PenaltyWeights) -> float:
    # a size-(k+1) set gains at most k edges, so A must exceed k*B
    return max(w.A, (g.k + 1) * w.B)


def kcolor_penalty(g: GraphData, w: PenaltyWeights) -> float:
    # recoloring an uncolored vertex creates at most deg conflicts
    return max(w.A, (g.max_degree + 1) * w.B)


def tsp_penalty(g: GraphData, w: PenaltyWeights) -> float:
    maxw = max((wt for _, _, wt in g.edges), default=0.0)
    return 2.0 * (maxw if maxw > 0 else 1.0) * g.node_count * w.B


def build_qubo(inst: ProblemInstance, w: PenaltyWeights | None = None) -> QuboQcf:
    w = w or PenaltyWeights()
    if inst.tag not in QUBO_TAGS:
        raise UnsupportedTag(f"{inst.tag.display} has no QUBO formulation")
    g = inst.graph
    n = g.node_count
    tag = inst.tag

    if tag == ProblemTag.MAXCUT:
        b = _QuboBuilder(n)
        for u, v, wt in g.edges:
            b.lin(u, -wt)
            b.lin(v, -wt)
            b.quad(u, v, 2 * wt)
        return QuboQcf(n, b.Q, tuple(range(n)))

    if tag == ProblemTag.MIS:
        b = _QuboBuilder(n)
        for u, v, _ in g.edges:
            b.quad(u, v, w.A)
        for v in range(n):
            b.lin(v, -w.B)
        return QuboQcf(n, b.Q, tuple(range(n)))

    if tag == ProblemTag.VERTEX_COVER:
        b = _QuboBuilder(n)
        for u, v, _ in g.edges:
            # A (1 - x_u)(1 - x_v), constant dropped
            b.lin(u, -w.A)
            b.lin(v, -w.A)
            b.quad(u, v, w.A)
        for v in range(n):
            b.lin(v, w.B)
        return QuboQcf(n, b.Q, tuple(range(n)))

    if tag == ProblemTag.CLIQUE:
        A = clique_penalty(g, w)
        b = _QuboBuilder(n)
        b.one_hot(range(n), A, target=g.k)
        for u, v, _ in g.edges:
            b.quad(u, v, -w.B)
        return QuboQcf(n, b.Q, tuple(range(n)))

    if tag == ProblemTag.KCOLOR:
        k = g.k
        A = kcolor_penalty(g, w)
        b = _QuboBuilder(n * k)
        for v in range(n):
            b.one_hot([v * k + c for c in range(k)], A)
        for u, v, _ in g.edges:
            for c in range(k):
                b.quad(u * k + c, v * k + c, w.B)
        return QuboQcf(n * k, b.Q, tuple((v, c) for v in range(n) for c in range(k)))

    # TSP: x[c*n + p] = city c visited at position p
    A = tsp_penalty(g, w)
    b = _QuboBuilder(n * n)
    for c in range(n):
        b.one_hot([c * n + p for p in range(n)], A)
    for p in range(n):
        b.one_hot([c * n + p for c in range(n)], A)
    wm = g.weight_matrix()
    adj = g.adjacency()
    for u in range(n):
        for v in range(n):
            if u == v:
                continue
            cost = w.B * wm[u][v] if v in adj[u] else A
            for p in range(n):
                b.quad(u * n + p, v * n + (p + 1) % n, cost)
    return QuboQcf(n * n, b.Q, tuple((c, p) for c in range(n) for p in range(n)))


def _bits(x, n: int) -> np.ndarray:
    if isinstance(x, str):
        if len(x) != n:
            raise LengthMismatch(f"bitstring length {len(x)} != {n}")
        # qubit 0 is the rightmost character
        return np.array([int(ch) for ch in reversed(x)], dtype=float)
    arr = np.asarray(x, dtype=float)
    if arr.shape != (n,):
        raise LengthMismatch(f"vector length {arr.shape} != {n}")
    return arr


def qubo_value(q: QuboQcf, x) -> float:
    v = _bits(x, q.n)
    return float(v @ q.Q @ v)


def qubo_values_all(q: QuboQcf) -> np.ndarray:
    """Values for every assignment, indexed by the assignment integer (bit i = variable i)."""
    idx = np.arange(1 << q.n)
    X = ((idx[:, None] >> np.arange(q.n)) & 1).astype(float)
    return np.einsum("bi,ij,bj->b", X, q.Q, X)


def qubo_to_ising(q: QuboQcf) -> IsingModel:
    n = q.n
    h = np.zeros(n)
    J: dict[tuple[int, int], float] = {}
    offset = 0.0
    for i in range(n):
        c = q.Q[i, i]
        h[i] -= c / 2
        offset += c / 2
        for j in range(i + 1, n):
            c = q.Q[i, j]
            if c == 0:
                continue
            J[(i, j)] = -c / 4
            h[i] -= c / 4
            h[j] -= c / 4
            offset += c / 4
    return IsingModel(n, J, tuple(float(v) for v in h), float(offset))


def ising_energy(m: IsingModel, s) -> float:
    s = np.asarray(s, dtype=float)
    if s.shape != (m.n,):
        raise LengthMismatch(f"spin vector length {s.shape} != {m.n}")
    if not np.all(np.abs(s) == 1):
        raise NonSpinValue("spins must be +1 or -1")
    e = -float(np.dot(m.h, s)) if m.n else 0.0
    for (i, j), v in m.J.items():
        e -= v * s[i] * s[j]
    return e + m.offset


def ising_energies_all(m: IsingModel) -> np.ndarray:
    """Energies for every assignment integer, spin s_i = 2*bit_i - 1."""
    idx = np.arange(1 << m.n)
    S = 2.0 * ((idx[:, None] >> np.arange(m.n)) & 1) - 1.0
    e = -S @ np.asarray(m.h, dtype=float) if m.n else np.zeros(len(idx))
    for (i, j), v in m.J.items():
        e = e - v * S[:, i] * S[:, j]
    return e + m.offset


# ---------------------------------------------------------------- CNF


def factor_bits(N: int) -> int:
    return (N // 2).bit_length()


def build_cnf(inst: ProblemInstance) -> OracleQcf:
    tag = inst.tag
    if tag not in ORACLE_TAGS:
        raise UnsupportedTag(f"{tag.display} has no oracle formulation")

    if tag == ProblemTag.FACTORIZATION:
        N = int(inst.data)
        if N > MAX_FACTOR_N:
            raise TooManyVariables(f"N={N} exceeds the enumeration bound {MAX_FACTOR_N}")
        nb = factor_bits(N)
        clauses = []
        for d in range(1 << nb):
            if 2 <= d <= N // 2 and N % d == 0:
                continue
            # block assignment d
            clauses.append(tuple(-(i + 1) if (d >> i) & 1 else (i + 1) for i in range(nb)))
        return OracleQcf(CnfFormula(nb, tuple(clauses)), tuple(f"d{i}" for i in range(nb)))

    g = inst.graph
    n = g.node_count
    adj = g.adjacency()
    clauses: list[tuple[int, ...]] = []

    def var(v):
        return v + 1

    if tag == ProblemTag.MIS:
        for u, v, _ in g.edges:
            clauses.append((-var(u), -var(v)))
        for v in range(n):
            clauses.append(tuple(sorted([var(v)] + [var(u) for u in adj[v]])))
        return OracleQcf(CnfFormula(n, tuple(clauses)), tuple(range(n)))

    if tag == ProblemTag.CLIQUE:
        k = g.k
        if k > n:
            return OracleQcf(CnfFormula(max(n, 1), ((1,), (-1,))), tuple(range(max(n, 1))))
        for u, v in itertools.combinations(range(n), 2):
            if v not in adj[u]:
                clauses.append((-var(u), -var(v)))
        for sub in itertools.combinations(range(n), n - k + 1):
            clauses.append(tuple(var(v) for v in sub))
        # only (k+1)-cliques need an explicit upper bound; other sets hit a non-edge clause
        for sub in itertools.combinations(range(n), k + 1):
            if all(b in adj[a] for a, b in itertools.combinations(sub, 2)):
                clauses.append(tuple(-var(v) for v in sub))
        return OracleQcf(CnfFormula(n, tuple(clauses)), tuple(range(n)))

    if tag == ProblemTag.VERTEX_COVER:
        k = g.k
        for u, v, _ in g.edges:
            clauses.append((var(u), var(v)))
        if k < n:
            for sub in itertools.combinations(range(n), k + 1):
                clauses.append(tuple(-var(v) for v in sub))
        if not clauses:
            # every subset qualifies; keep the formula non-empty with a tautology
            clauses.append((1, -1))
        return OracleQcf(CnfFormula(n, tuple(clauses)), tuple(range(n)))

    # KColor: variable v*k + c + 1 means vertex v has color c
    k = g.k

    def cv(v, c):
        return v * k + c + 1

    for v in range(n):
        clauses.append(tuple(cv(v, c) for c in range(k)))
        for c1, c2 in itertools.combinations(range(k), 2):
            clauses.append((-cv(v, c1), -cv(v, c2)))
    for u, v, _ in g.edges:
        for c in range(k):
            clauses.append((-cv(u, c), -cv(v, c)))
    return OracleQcf(
        CnfFormula(n * k, tuple(clauses)), tuple((v, c) for v in range(n) for c in range(k))
    )


def build_arithmetic(inst: ProblemInstance, encoding: str = "qft") -> ArithmeticQcf:
    if inst.tag not in ARITH_TAGS:
        raise UnsupportedTag(f"{inst.tag.display} is not an arithmetic problem")
    if encoding not in ("qft", "reversible"):
        raise ValueError(f"unknown encoding {encoding!r}")
    return ArithmeticQcf(inst.tag, inst.data, encoding)


# ---------------------------------------------------------------- DIMACS


def to_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    lines += [" ".join(map(str, cl)) + " 0" for cl in f.clauses]
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    num_vars = None
    clauses: list[tuple[int, ...]] = []
    cur: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line: {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(cur))
                cur = []
            else:
                cur.append(lit)
    if cur:
        clauses.append(tuple(cur))
    if num_vars is None:
        raise ValueError("missing 'p cnf' header")
    return CnfFormula(num_vars, tuple(clauses))
