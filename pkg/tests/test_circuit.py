import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qbridge.circuit import (
    Circuit,
    Gate,
    GateKind,
    Param,
    ResourceMetrics,
    invert_circuit,
    resource_metrics,
)
from qbridge.errors import ContainsMeasurement, InvalidGate, UnboundParameter
from qbridge.generator import build_qft
from qbridge.simulator import circuit_unitary, run_statevector

K = GateKind


def bell() -> Circuit:
    c = Circuit(2)
    c.h(0).cx(0, 1).measure_all()
    return c


def test_empty_metrics():
    assert resource_metrics(Circuit(3)) == ResourceMetrics(0, 0, 0, 0, 0)


def test_bell_metrics():
    assert resource_metrics(bell()) == ResourceMetrics(N1=1, N2=1, Nm=2, D1Q=1, D2Q=1)


def test_sequential_cnots():
    c = Circuit(2).cx(0, 1).cx(0, 1)
    m = resource_metrics(c)
    assert (m.N2, m.D2Q) == (2, 2)


def test_parallel_layers():
    c = Circuit(4)
    for q in range(4):
        c.h(q)
    c.cx(0, 1).cx(2, 3)
    m = resource_metrics(c)
    assert (m.N1, m.D1Q, m.N2, m.D2Q) == (4, 1, 2, 1)


def test_unbound_metrics_rejected():
    c = Circuit(1).rx(0, Param("t"))
    with pytest.raises(UnboundParameter):
        resource_metrics(c)


def test_gate_validation():
    with pytest.raises(InvalidGate):
        Gate(K.CNOT, (0,))
    with pytest.raises(InvalidGate):
        Gate(K.CZ, (1, 1))
    with pytest.raises(InvalidGate):
        Gate(K.RZ, (0,))
    with pytest.raises(InvalidGate):
        Gate(K.H, (0,), 0.3)
    with pytest.raises(InvalidGate):
        Circuit(2).cx(0, 2)


def test_bind_removes_symbols():
    c = Circuit(2)
    c.rx(0, Param("a") * 2.0).rz(1, Param("b")).cp(Param("a"), 0, 1)
    assert c.parameters == {"a": 0, "b": 1}
    bound = c.bind([0.5, 1.5])
    assert not bound.is_parameterized
    assert [g.param for g in bound.ops] == [1.0, 1.5, 0.5]
    assert c.bind({"a": 0.5, "b": 1.5}).ops == bound.ops
    with pytest.raises(UnboundParameter):
        c.bind([1.0])


def test_invert_simple():
    assert invert_circuit(Circuit(1).h(0)).ops == [Gate(K.H, (0,))]
    assert invert_circuit(Circuit(1).rz(0, 0.7)).ops == [Gate(K.RZ, (0,), -0.7)]
    with pytest.raises(ContainsMeasurement):
        invert_circuit(bell())


def test_qft_then_inverse_is_identity():
    q = build_qft(3)
    c = q.copy().compose(invert_circuit(q))
    assert np.max(np.abs(circuit_unitary(c) - np.eye(8))) < 1e-10


def test_qft_matches_dft():
    n = 3
    N = 1 << n
    dft = np.array([[np.exp(2j * math.pi * j * k / N) for j in range(N)] for k in range(N)]) / math.sqrt(N)
    assert np.allclose(circuit_unitary(build_qft(n)), dft, atol=1e-10)


def test_terminal_measurements():
    c = Circuit(1).measure(0)
    c.ops.append(Gate(K.H, (0,)))
    with pytest.raises(InvalidGate):
        c.check_terminal_measurements()


def test_dump_round_trip():
    c = Circuit(3)
    c.h(0).cp(0.25, 0, 2).rx(1, Param("theta_0") * -2.0).swap(1, 2).measure_all()
    back = Circuit.loads(c.dumps())
    assert back.ops == c.ops
    assert back.num_qubits == 3


# random unitary circuits for the property tests

_one = [K.H, K.X, K.Y, K.Z, K.RX, K.RY, K.RZ, K.P]
_two = [K.CNOT, K.CZ, K.CP, K.SWAP]


@st.composite
def circuits(draw, n=None, size=25):
    n = n or draw(st.integers(1, 5))
    c = Circuit(n)
    for _ in range(draw(st.integers(0, size))):
        kinds = _one + (_two if n > 1 else [])
        k = draw(st.sampled_from(kinds))
        theta = draw(st.floats(-6.3, 6.3, allow_nan=False)) if k in (K.RX, K.RY, K.RZ, K.P, K.CP) else None
        qs = draw(st.permutations(range(n)))[: 2 if k in _two else 1]
        c.append(k, qs, theta)
    return c


@given(circuits())
def test_inverse_composes_to_identity(c):
    both = c.copy().compose(invert_circuit(c))
    dim = 1 << c.num_qubits
    assert np.allclose(circuit_unitary(both), np.eye(dim), atol=1e-9)


@given(circuits(), st.sampled_from(_one + _two), st.data())
def test_depth_monotone(c, k, data):
    if k in _two and c.num_qubits < 2:
        return
    before = resource_metrics(c)
    qs = data.draw(st.permutations(range(c.num_qubits)))[: 2 if k in _two else 1]
    c.append(k, qs, 0.3 if k in (K.RX, K.RY, K.RZ, K.P, K.CP) else None)
    after = resource_metrics(c)
    assert after.D1Q >= before.D1Q and after.D2Q >= before.D2Q


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(circuits(n), circuits(n))))
def test_composition_additivity(pair):
    a, b = pair
    ma, mb = resource_metrics(a), resource_metrics(b)
    mc = resource_metrics(a.copy().compose(b))
    assert (mc.N1, mc.N2, mc.Nm) == (ma.N1 + mb.N1, ma.N2 + mb.N2, ma.Nm + mb.Nm)
    assert mc.D1Q <= ma.D1Q + mb.D1Q
    assert mc.D2Q <= ma.D2Q + mb.D2Q


@given(circuits())
def test_norm_preserved(c):
    s = run_statevector(c)
    assert abs(s.norm() - 1) < 1e-9
