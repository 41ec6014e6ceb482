import pytest
from hypothesis import given, strategies as st

from qbridge.errors import MalformedGraph, OperandOverflow, TagDataMismatch
from qbridge.problem import (
    ARITH_TAGS,
    GRAPH_TAGS,
    ArithmeticOperands,
    GraphData,
    ProblemInstance,
    ProblemTag,
    is_prime,
    validate_instance,
)

T = ProblemTag


def test_tag_codes_follow_taxonomy_order():
    assert [t.value for t in T if t != T.UNKNOWN] == list(range(10))
    assert T.MAXCUT == 0 and T.FACTORIZATION == 6 and T.SUB == 9
    assert T.UNKNOWN.display == "Unknown"


def test_example_maxcut_accepted():
    g = GraphData.from_edges([(0, 1), (0, 2), (1, 3), (2, 3)])
    inst = validate_instance(ProblemInstance(T.MAXCUT, g))
    assert inst.graph.node_count == 4
    assert len(inst.graph.edges) == 4
    assert all(w == 1.0 for *_, w in inst.graph.edges)


def test_zero_operands_accepted():
    validate_instance(ProblemInstance(T.ADD, ArithmeticOperands(0, 0, 1, 1)))


def test_edge_out_of_range_rejected():
    g = GraphData.from_edges([(0, 5)], node_count=4)
    with pytest.raises(MalformedGraph):
        validate_instance(ProblemInstance(T.MIS, g))


@pytest.mark.parametrize(
    "edges, n",
    [([(1, 1)], 2), ([(0, 1), (1, 0)], 2), ([(0, 1, float("nan"))], 2), ([(0, 1, -1.0)], 2)],
)
def test_malformed_graphs(edges, n):
    with pytest.raises(MalformedGraph):
        validate_instance(ProblemInstance(T.MAXCUT, GraphData.from_edges(edges, n)))


def test_directed_edges_canonicalised():
    g = GraphData.from_edges([(3, 1), (2, 0, 4.5)])
    assert g.edges == ((0, 2, 4.5), (1, 3, 1.0))


def test_isolated_vertices_allowed():
    g = GraphData.from_edges([(0, 1)], node_count=5)
    validate_instance(ProblemInstance(T.MIS, g))
    assert g.adjacency()[4] == set()


@pytest.mark.parametrize("tag", [T.CLIQUE, T.KCOLOR, T.VERTEX_COVER])
def test_k_required(tag):
    g = GraphData.from_edges([(0, 1)])
    with pytest.raises(TagDataMismatch):
        validate_instance(ProblemInstance(tag, g))
    validate_instance(ProblemInstance(tag, GraphData.from_edges([(0, 1)], k=2)))


def test_data_variant_must_match_tag():
    with pytest.raises(TagDataMismatch):
        validate_instance(ProblemInstance(T.MAXCUT, 15))
    with pytest.raises(TagDataMismatch):
        validate_instance(ProblemInstance(T.ADD, GraphData.from_edges([(0, 1)])))
    with pytest.raises(TagDataMismatch):
        validate_instance(ProblemInstance(T.FACTORIZATION, ArithmeticOperands(1, 1, 1, 1)))
    with pytest.raises(TagDataMismatch):
        validate_instance(ProblemInstance(T.UNKNOWN, None))


def test_operand_overflow():
    with pytest.raises(OperandOverflow):
        validate_instance(ProblemInstance(T.ADD, ArithmeticOperands(4, 0, 2, 2)))
    with pytest.raises(OperandOverflow):
        validate_instance(ProblemInstance(T.SUB, ArithmeticOperands(0, 8, 3, 3)))


def test_product_width_defaults_to_sum():
    w = ArithmeticOperands(3, 5, 2, 3)
    assert w.product_width == 5
    auto = ArithmeticOperands.auto(T.MUL, 3, 5)
    assert (auto.width_a, auto.width_b, auto.width_c) == (2, 3, 5)


def test_factorization_rejects_primes():
    validate_instance(ProblemInstance(T.FACTORIZATION, 15))
    with pytest.raises(TagDataMismatch):
        validate_instance(ProblemInstance(T.FACTORIZATION, 13))
    with pytest.raises(TagDataMismatch):
        validate_instance(ProblemInstance(T.FACTORIZATION, 3))


def _trial_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


@given(st.integers(0, 20000))
def test_is_prime_matches_trial_division(n):
    assert is_prime(n) == _trial_prime(n)


def test_is_prime_large_values():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


edge_lists = st.lists(
    st.tuples(st.integers(0, 6), st.integers(0, 6)).filter(lambda e: e[0] != e[1]),
    max_size=12,
).map(lambda es: list({(min(u, v), max(u, v)) for u, v in es}))


@given(edge_lists, st.sampled_from(sorted(GRAPH_TAGS - {T.TSP})))
def test_validate_is_idempotent(edges, tag):
    g = GraphData.from_edges(edges, 7, k=2)
    once = validate_instance(ProblemInstance(tag, g))
    assert validate_instance(once) == once


def test_each_tag_has_one_data_variant():
    variants = {}
    for t in T:
        if t == T.UNKNOWN:
            continue
        variants[t] = GraphData if t in GRAPH_TAGS else ArithmeticOperands if t in ARITH_TAGS else int
    assert set(variants) == set(T) - {T.UNKNOWN}
    assert sum(v is int for v in variants.values()) == 1
