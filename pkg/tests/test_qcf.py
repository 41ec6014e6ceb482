"""QUBO, Ising and CNF formats checked against direct enumeration."""

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import bits_of, paw_mis
from qbridge.errors import LengthMismatch, NonSpinValue, UnsupportedTag
from qbridge.problem import ArithmeticOperands, GraphData, ProblemInstance, ProblemTag
from qbridge.qcf import (
    CnfFormula,
    IsingModel,
    PenaltyWeights,
    QuboQcf,
    build_arithmetic,
    build_cnf,
    build_qubo,
    factor_bits,
    ising_energies_all,
    ising_energy,
    parse_dimacs,
    qubo_to_ising,
    qubo_value,
    qubo_values_all,
    to_dimacs,
)

T = ProblemTag


def argmin_set(values, tol=1e-9):
    lo = values.min()
    return {i for i, v in enumerate(values) if v <= lo + tol}


def as_str(x: int, n: int) -> str:
    return format(x, f"0{n}b")


# ---------------------------------------------------------------- QUBO


def test_paw_mis_minima():
    q = build_qubo(paw_mis(), PenaltyWeights(2.0, 1.0))
    assert q.n == 4
    assert {as_str(x, 4) for x in argmin_set(qubo_values_all(q))} == {"1100", "1001"}
    # frozen from direct evaluation of A*sum(x_u x_v) - B*sum(x_v)
    assert qubo_value(q, "1100") == pytest.approx(-2.0)
    assert qubo_value(q, "1111") > -2.0
    assert qubo_value(q, "0000") == 0.0


def test_paw_mis_matches_penalty_formula():
    q = build_qubo(paw_mis())
    edges = [(0, 1), (0, 2), (1, 2), (1, 3)]
    for x in range(16):
        b = bits_of(x, 4)
        direct = 2.0 * sum(b[u] * b[v] for u, v in edges) - sum(b)
        assert qubo_values_all(q)[x] == pytest.approx(direct)


def test_single_edge_maxcut():
    q = build_qubo(ProblemInstance(T.MAXCUT, GraphData.from_edges([(0, 1)])))
    assert {as_str(x, 2) for x in argmin_set(qubo_values_all(q))} == {"01", "10"}


def test_triangle_maxcut():
    q = build_qubo(ProblemInstance(T.MAXCUT, GraphData.from_edges([(0, 1), (1, 2), (0, 2)])))
    minima = argmin_set(qubo_values_all(q))
    assert len(minima) == 6
    assert all(bin(x).count("1") in (1, 2) for x in minima)
    assert qubo_values_all(q).min() == pytest.approx(-2.0)


def test_storage_upper_triangular_and_sizes():
    g = GraphData.from_edges([(0, 1), (1, 2)], k=2)
    for tag, n in [(T.MIS, 3), (T.CLIQUE, 3), (T.VERTEX_COVER, 3), (T.KCOLOR, 6), (T.TSP, 9)]:
        q = build_qubo(ProblemInstance(tag, g))
        assert q.n == n
        assert not np.any(np.tril(q.Q, -1))
    with pytest.raises(ValueError):
        QuboQcf(2, np.array([[0.0, 0.0], [1.0, 0.0]]), (0, 1))


@pytest.mark.parametrize("tag", [T.FACTORIZATION, T.ADD])
def test_no_qubo_for_non_graph(tag):
    data = 15 if tag == T.FACTORIZATION else ArithmeticOperands(1, 1, 2, 2)
    with pytest.raises(UnsupportedTag):
        build_qubo(ProblemInstance(tag, data))


def test_qubo_value_length_checked():
    q = build_qubo(paw_mis())
    with pytest.raises(LengthMismatch):
        qubo_value(q, "101")


# ---------------------------------------------------------------- Ising


def test_zero_model():
    m = qubo_to_ising(QuboQcf(1, np.zeros((1, 1)), (0,)))
    assert m.J == {} and m.h == (0.0,) and m.offset == 0.0
    for s in ([1], [-1]):
        assert ising_energy(m, s) == 0.0


def test_two_variable_expansion():
    q = QuboQcf(2, np.array([[1.0, 2.0], [0.0, 3.0]]), (0, 1))
    m = qubo_to_ising(q)
    # x = (s+1)/2 gives h = (-1, -2), J = -1/2, offset = 5/2
    assert m.h == pytest.approx((-1.0, -2.0))
    assert m.J == {(0, 1): pytest.approx(-0.5)}
    assert m.offset == pytest.approx(2.5)
    for x in range(4):
        b = bits_of(x, 2)
        s = [2 * v - 1 for v in b]
        assert ising_energy(m, s) == pytest.approx(qubo_value(q, b))


def test_single_field():
    assert ising_energy(IsingModel(1, {}, (1.0,), 0.0), [1]) == -1.0


def test_spin_validation():
    m = IsingModel(2, {}, (0.0, 0.0))
    with pytest.raises(NonSpinValue):
        ising_energy(m, [1, 0])
    with pytest.raises(LengthMismatch):
        ising_energy(m, [1])


def test_paw_ground_states():
    m = qubo_to_ising(build_qubo(paw_mis()))
    e = ising_energies_all(m)
    assert {as_str(x, 4) for x in argmin_set(e)} == {"1100", "1001"}


@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_ising_matches_qubo_everywhere(n, seed):
    rng = np.random.default_rng(seed)
    q = QuboQcf(n, np.triu(rng.normal(size=(n, n))), tuple(range(n)))
    m = qubo_to_ising(q)
    vals = qubo_values_all(q)
    for x in range(1 << n):
        b = bits_of(x, n)
        assert ising_energy(m, [2 * v - 1 for v in b]) == pytest.approx(vals[x], abs=1e-9)
    assert argmin_set(ising_energies_all(m)) == argmin_set(vals)


# ---------------------------------------------------------------- CNF


def test_paw_cnf():
    o = build_cnf(paw_mis())
    assert o.input_qubits == 4
    sat = {as_str(x, 4) for x in range(16) if o.formula.evaluate(x)}
    # every maximal independent set; {1} is maximal too, though not maximum
    assert sat == {"1100", "1001", "0010"}


def test_isolated_vertex_cnf():
    o = build_cnf(ProblemInstance(T.MIS, GraphData.from_edges([], 1)))
    assert o.formula.clauses == ((1,),)
    assert [x for x in range(2) if o.formula.evaluate(x)] == [1]


def test_factor_15():
    o = build_cnf(ProblemInstance(T.FACTORIZATION, 15))
    assert o.input_qubits == factor_bits(15) == 3
    assert {x for x in range(8) if o.formula.evaluate(x)} == {3, 5}


@given(st.integers(4, 2000))
def test_factor_cnf_marks_divisors(N):
    o = build_cnf(ProblemInstance(T.FACTORIZATION, N))
    nb = o.input_qubits
    marked = set(np.flatnonzero(o.formula.satisfying_mask()))
    assert marked == {d for d in range(2, N // 2 + 1) if N % d == 0 and d < 1 << nb}
    assert N // 2 < 1 << nb


def test_no_cnf_for_maxcut():
    with pytest.raises(UnsupportedTag):
        build_cnf(ProblemInstance(T.MAXCUT, GraphData.from_edges([(0, 1)])))


def test_arithmetic_qcf_semantics():
    w = ArithmeticOperands(3, 5, 4, 4, 4)
    assert build_arithmetic(ProblemInstance(T.ADD, w)).expected() == 8
    assert build_arithmetic(ProblemInstance(T.SUB, w)).expected() == 2
    assert build_arithmetic(ProblemInstance(T.MUL, w)).expected() == 15
    assert build_arithmetic(ProblemInstance(T.MUL, ArithmeticOperands(5, 5, 4, 4, 4))).expected() == 9
    with pytest.raises(UnsupportedTag):
        build_arithmetic(paw_mis())


def test_dimacs_round_trip():
    f = build_cnf(paw_mis()).formula
    text = to_dimacs(f)
    assert text.startswith("p cnf 4 ")
    assert parse_dimacs(text) == f


def test_cnf_rejects_bad_literals():
    with pytest.raises(ValueError):
        CnfFormula(2, ((3,),))
    with pytest.raises(ValueError):
        CnfFormula(2, ((),))


@given(st.integers(1, 8), st.lists(st.lists(st.integers(-8, 8).filter(bool), min_size=1, max_size=4), min_size=1, max_size=10))
def test_satisfying_mask_matches_evaluate(n, raw):
    clauses = tuple(tuple(l for l in cl if abs(l) <= n) or (1,) for cl in raw)
    f = CnfFormula(n, clauses)
    mask = f.satisfying_mask()
    assert [bool(m) for m in mask] == [f.evaluate(x) for x in range(1 << n)]


# independent classical predicates over subsets of vertices


def _classical_feasible(tag, g: GraphData, S: set[int]) -> bool:
    adj = g.adjacency()
    indep = all(v not in adj[u] for u, v in itertools.combinations(S, 2))
    if tag == T.MIS:
        return indep and all(v in S or adj[v] & S for v in range(g.node_count))
    if tag == T.CLIQUE:
        return len(S) == g.k and all(v in adj[u] for u, v in itertools.combinations(S, 2))
    return len(S) <= g.k and all(u in S or v in S for u, v, _ in g.edges)


@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1), st.sampled_from([T.MIS, T.CLIQUE, T.VERTEX_COVER]))
def test_cnf_equals_classical_feasibility(n, k, seed, tag):
    rng = np.random.default_rng(seed)
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < 0.5]
    g = GraphData.from_edges(edges, n, k)
    f = build_cnf(ProblemInstance(tag, g)).formula
    for x in range(1 << n):
        S = {v for v in range(n) if (x >> v) & 1}
        assert f.evaluate(x) == _classical_feasible(tag, g, S)


@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_kcolor_cnf_equals_proper_colorings(n, k, seed):
    rng = np.random.default_rng(seed)
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < 0.5]
    g = GraphData.from_edges(edges, n, k)
    f = build_cnf(ProblemInstance(T.KCOLOR, g)).formula
    sat = {x for x in range(1 << (n * k)) if f.evaluate(x)}
    expected = set()
    for colors in itertools.product(range(k), repeat=n):
        if all(colors[u] != colors[v] for u, v in edges):
            expected.add(sum(1 << (v * k + c) for v, c in enumerate(colors)))
    assert sat == expected
