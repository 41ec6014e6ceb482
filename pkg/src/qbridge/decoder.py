"""Measurement counts back to classical solutions, plus exhaustive reference solvers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import DecodeError, NoFeasibleOutcome, TooLarge
from .problem import ARITH_TAGS, GraphData, ProblemInstance, ProblemTag
from .qcf import ArithmeticQcf, OracleQcf, QuboQcf
from .simulator import Counts

T = ProblemTag

MAX_VERTICES = 16
MAX_OPERAND = 1 << 16
MAX_N = 1 << 20
MAX_ASSIGNMENTS = 1 << 20  # KColor enumerates k**n colourings
MAX_TSP_ENUM = 9  # full optimal-tour families are listed up to this many cities

MAXIMIZE = frozenset({T.MAXCUT, T.MIS, T.CLIQUE})


@dataclass(frozen=True)
class Solution:
    tag: ProblemTag
    value: Any
    objective: float
    feasible: bool
    confidence: float = 1.0
    top: tuple[tuple[str, int], ...] = ()  # most frequent raw outcomes
    bitstring: str | None = None
    optimal: tuple = ()  # every optimal value (reference solver only)

    def to_json(self) -> dict:
        return {
            "tag": self.tag.display,
            "value": _jsonable(self.value),
            "objective": self.objective,
            "feasible": self.feasible,
            "confidence": self.confidence,
            "bitstring": self.bitstring,
            "top": [{"bitstring": b, "count": c} for b, c in self.top],
        }


def _jsonable(v):
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


# ------------------------------------------------------------ interpretation


def _bits(bitstring: str) -> list[int]:
    # qubit 0 is the rightmost character
    return [int(ch) for ch in reversed(bitstring)]


def _is_independent(adj, S) -> bool:
    return all(v not in adj[u] for u, v in itertools.combinations(S, 2))


def _is_clique(adj, S) -> bool:
    return all(v in adj[u] for u, v in itertools.combinations(S, 2))


def _is_cover(g: GraphData, S) -> bool:
    s = set(S)
    return all(u in s or v in s for u, v, _ in g.edges)


def cut_weight(g: GraphData, S) -> float:
    s = set(S)
    return float(sum(w for u, v, w in g.edges if (u in s) != (v in s)))


def canonical_tour(tour) -> tuple[int, ...]:
    """Representative of a cycle up to rotation and reflection: starts at the smallest city."""
    t = list(tour)
    i = t.index(min(t))
    t = t[i:] + t[:i]
    if len(t) > 2 and t[-1] < t[1]:
        t = [t[0]] + t[1:][::-1]
    return tuple(t)


def tour_length(g: GraphData, tour) -> float | None:
    wm, adj = g.weight_matrix(), g.adjacency()
    n = len(tour)
    total = 0.0
    for i in range(n):
        u, v = tour[i], tour[(i + 1) % n]
        if n == 2 and i == 1:
            break  # a two-city tour uses its single road once
        if v not in adj[u]:
            return None
        total += wm[u][v]
    return total


@dataclass(frozen=True)
class _Reading:
    feasible: bool
    value: Any
    objective: float
    key: Any  # outcome class: outcomes sharing a key are the same solution


def interpret(inst: ProblemInstance, x: list[int]) -> _Reading:
    """Problem-level reading of a variable assignment (QUBO / CNF variable layout)."""
    tag = inst.tag
    if tag == T.FACTORIZATION:
        N = int(inst.data)
        d = sum(b << i for i, b in enumerate(x))
        ok = 2 <= d <= N // 2 and N % d == 0
        pair = tuple(sorted((d, N // d))) if ok else (d, None)
        return _Reading(ok, pair, 0.0, pair)
    g = inst.graph
    n, adj = g.node_count, g.adjacency()
    if tag == T.KCOLOR:
        k = g.k
        colors = []
        ok = True
        for v in range(n):
            row = x[v * k : (v + 1) * k]
            if sum(row) != 1:
                ok = False
                colors.append(None)
            else:
                colors.append(row.index(1))
        conflicts = sum(1 for u, v, _ in g.edges if colors[u] is not None and colors[u] == colors[v])
        ok = ok and conflicts == 0
        value = tuple(colors)
        return _Reading(ok, value, float(conflicts), value)
    if tag == T.TSP:
        pos = [[c for c in range(n) if x[c * n + p]] for p in range(n)]
        per_city = [sum(x[c * n : (c + 1) * n]) for c in range(n)]
        if any(len(p) != 1 for p in pos) or any(s != 1 for s in per_city):
            return _Reading(False, None, float("inf"), ("invalid", tuple(x)))
        tour = tuple(p[0] for p in pos)
        length = tour_length(g, tour)
        canon = canonical_tour(tour)
        if length is None:
            return _Reading(False, canon, float("inf"), canon)
        return _Reading(True, canon, length, canon)
    S = tuple(v for v in range(n) if x[v])
    if tag == T.MAXCUT:
        rest = tuple(v for v in range(n) if not x[v])
        part = (S, rest) if 0 in S or not rest else (rest, S)
        return _Reading(True, part, cut_weight(g, S), part)
    if tag == T.MIS:
        return _Reading(_is_independent(adj, S), S, float(len(S)), S)
    if tag == T.CLIQUE:
        return _Reading(_is_clique(adj, S) and len(S) == g.k, S, float(len(S)), S)
    if tag == T.VERTEX_COVER:
        return _Reading(_is_cover(g, S), S, float(len(S)), S)
    raise DecodeError(f"no decoder for {tag.display}")


# ------------------------------------------------------------ decoding


def _decode_arith(counts: Counts, inst: ProblemInstance, qcf: ArithmeticQcf) -> Solution:
    o = qcf.operands
    width = o.product_width if qcf.op == T.MUL else o.width_b
    if counts.width != width:
        raise DecodeError(f"outcome width {counts.width} does not match the {width}-bit target register")
    freq: dict[int, int] = {}
    for b, c in counts.counts.items():
        v = int(b, 2)
        freq[v] = freq.get(v, 0) + c
    value = min(freq, key=lambda v: (-freq[v], v))
    bit = format(value, f"0{width}b")
    return Solution(inst.tag, value, float(value), True, freq[value] / counts.shots,
                    tuple(counts.most_common(5)), bit)


def decode_solution(counts: Counts, inst: ProblemInstance, qcf) -> Solution:
    """Feasible outcomes only, best objective first, then class frequency, then smallest class key."""
    if not counts.counts:
        raise DecodeError("no measured outcomes")
    if isinstance(qcf, ArithmeticQcf) or inst.tag in ARITH_TAGS:
        return _decode_arith(counts, inst, qcf)
    if isinstance(qcf, QuboQcf):
        width = qcf.n
        check = None
    elif isinstance(qcf, OracleQcf):
        width = qcf.input_qubits
        check = qcf.formula
    else:
        raise DecodeError(f"unsupported QCF {type(qcf).__name__}")
    if counts.width != width:
        raise DecodeError(f"outcome width {counts.width} does not match {width} problem variables")

    classes: dict[Any, list] = {}  # key -> [reading, frequency, representative bitstring]
    for b, c in counts.counts.items():
        r = interpret(inst, _bits(b))
        if check is not None and not check.evaluate(int(b, 2)):
            continue
        if not r.feasible:
            continue
        entry = classes.setdefault(r.key, [r, 0, b])
        entry[1] += c
        if counts.counts.get(entry[2], 0) < c:
            entry[2] = b
    top = tuple(counts.most_common(5))
    if not classes:
        raise NoFeasibleOutcome(f"none of the {len(counts.counts)} distinct outcomes is feasible")

    sign = -1.0 if inst.tag in MAXIMIZE else 1.0
    key = min(classes, key=lambda k: (sign * classes[k][0].objective, -classes[k][1], k))
    r, freq, bit = classes[key]
    return Solution(inst.tag, r.value, r.objective, True, freq / counts.shots, top, bit)


# ------------------------------------------------------------ reference solvers


def _subset_masks(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(bool)


def _subset_solve(inst: ProblemInstance) -> tuple[list[tuple], float]:
    g = inst.graph
    n = g.node_count
    X = _subset_masks(n)
    size = X.sum(axis=1)
    if g.edges:
        u = np.array([e[0] for e in g.edges])
        v = np.array([e[1] for e in g.edges])
        w = np.array([e[2] for e in g.edges])
        xu, xv = X[:, u], X[:, v]
    else:
        xu = xv = np.zeros((1 << n, 0), dtype=bool)
        w = np.zeros(0)
    tag = inst.tag
    if tag == T.MAXCUT:
        score = ((xu ^ xv) * w).sum(axis=1)
        ok = np.ones(1 << n, dtype=bool)
    elif tag == T.MIS:
        ok = ~(xu & xv).any(axis=1)
        score = size
    elif tag == T.VERTEX_COVER:
        ok = (xu | xv).all(axis=1)
        score = size
    else:  # clique of exactly k vertices
        non = [(a, b) for a, b in itertools.combinations(range(n), 2) if b not in g.adjacency()[a]]
        if non:
            na, nb = np.array(non).T
            ok = ~(X[:, na] & X[:, nb]).any(axis=1)
        else:
            ok = np.ones(1 << n, dtype=bool)
        ok &= size == g.k
        score = size
    if not ok.any():
        return [], float("nan")
    s = np.where(ok, score, -np.inf if tag in MAXIMIZE else np.inf)
    best = s.max() if tag in MAXIMIZE else s.min()
    hits = np.flatnonzero(np.isclose(s, best, rtol=0, atol=1e-9))
    return [tuple(np.flatnonzero(X[i]).tolist()) for i in hits], float(best)


def _held_karp(g: GraphData) -> tuple[float, tuple[int, ...]] | None:
    n = g.node_count
    wm, adj = g.weight_matrix(), g.adjacency()
    D = np.full((n, n), np.inf)
    for u in range(n):
        for v in adj[u]:
            D[u, v] = wm[u][v]
    full = 1 << (n - 1)  # subsets of cities 1..n-1
    dp = np.full((full, n), np.inf)
    parent = np.full((full, n), -1, dtype=np.int64)
    for j in range(1, n):
        dp[1 << (j - 1), j] = D[0, j]
    for S in range(1, full):
        for j in range(1, n):
            bj = 1 << (j - 1)
            if not S & bj or S == bj:
                continue
            prev = S ^ bj
            cand = [(dp[prev, i] + D[i, j], i) for i in range(1, n) if prev & (1 << (i - 1))]
            val, arg = min(cand)
            dp[S, j], parent[S, j] = val, arg
    ends = [(dp[full - 1, j] + D[j, 0], j) for j in range(1, n)]
    best, j = min(ends)
    if not np.isfinite(best):
        return None
    tour, S = [], full - 1
    while j > 0:
        tour.append(j)
        S, j = S ^ (1 << (j - 1)), int(parent[S, j])
    return float(best), tuple([0] + tour[::-1])


def _tsp_solve(inst: ProblemInstance) -> tuple[list[tuple], float]:
    g = inst.graph
    n = g.node_count
    if n == 2:
        length = tour_length(g, (0, 1))
        return ([(0, 1)], length) if length is not None else ([], float("nan"))
    if n <= MAX_TSP_ENUM:
        best, tours = np.inf, set()
        for perm in itertools.permutations(range(1, n)):
            t = (0,) + perm
            if t[1] > t[-1]:
                continue  # reflection of a tour already seen
            length = tour_length(g, t)
            if length is None:
                continue
            if length < best - 1e-9:
                best, tours = length, {canonical_tour(t)}
            elif abs(length - best) <= 1e-9:
                tours.add(canonical_tour(t))
        return (sorted(tours), float(best)) if tours else ([], float("nan"))
    hk = _held_karp(g)
    if hk is None:
        return [], float("nan")
    return [canonical_tour(hk[1])], hk[0]


def _kcolor_solve(inst: ProblemInstance) -> tuple[list[tuple], float]:
    g = inst.graph
    n, k = g.node_count, g.k
    if k ** n > MAX_ASSIGNMENTS:
        raise TooLarge(f"{k}**{n} colourings exceed the enumeration bound")
    idx = np.arange(k ** n, dtype=np.int64)
    C = (idx[:, None] // (k ** np.arange(n))) % k
    ok = np.ones(len(idx), dtype=bool)
    for u, v, _ in g.edges:
        ok &= C[:, u] != C[:, v]
    return [tuple(int(c) for c in row) for row in C[ok]], 0.0


def brute_force_solve(inst: ProblemInstance) -> Solution:
    """Exact optimum by enumeration; `optimal` lists the whole optimal family."""
    tag = inst.tag
    if tag in ARITH_TAGS:
        o = inst.data
        if max(o.a, o.b) > MAX_OPERAND:
            raise TooLarge("operands exceed the direct-evaluation bound")
        value = ArithmeticQcf(tag, o).expected()
        return Solution(tag, value, float(value), True, optimal=(value,))
    if tag == T.FACTORIZATION:
        N = int(inst.data)
        if N > MAX_N:
            raise TooLarge(f"N={N} exceeds {MAX_N}")
        pairs = tuple((d, N // d) for d in range(2, int(N ** 0.5) + 1) if N % d == 0)
        if not pairs:
            return Solution(tag, None, 0.0, False)
        return Solution(tag, pairs[0], 0.0, True, optimal=pairs)
    g = inst.graph
    if g.node_count > MAX_VERTICES:
        raise TooLarge(f"{g.node_count} vertices exceed the enumeration bound {MAX_VERTICES}")
    if tag == T.TSP:
        family, best = _tsp_solve(inst)
    elif tag == T.KCOLOR:
        family, best = _kcolor_solve(inst)
    else:
        family, best = _subset_solve(inst)
    if tag == T.MAXCUT:
        family = sorted({interpret(inst, [1 if v in S else 0 for v in range(g.node_count)]).value for S in family})
    if not family:
        return Solution(tag, None, float("nan"), False)
    family = sorted(family)
    return Solution(tag, family[0], best, True, optimal=tuple(family))
