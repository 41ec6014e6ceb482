import json
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qbridge.circuit import ResourceMetrics
from qbridge.devices import (
    PerOperation,
    PerShot,
    TimeBased,
    estimate,
    estimate_cost,
    estimate_error,
    estimate_time,
    load_registry,
    parse_registry,
    registry_json,
)
from qbridge.errors import SchemaError
from qbridge.varloop import Workload

# calibration table transcribed by hand: qubits, e1, e2, em, t1, t2, T1, T2
TABLE = {
    "IBM Kyiv": (127, 2.8e-4, 1.2e-2, 7.0e-3, 50e-9, 500e-9, 258e-6, 109e-6),
    "IBM Sherbrooke": (127, 2.2e-4, 7.8e-3, 1.3e-2, 57e-9, 530e-9, 261e-6, 168e-6),
    "IBM Brisbane": (127, 2.5e-4, 7.7e-3, 1.3e-2, 60e-9, 660e-9, 221e-6, 134e-6),
    "Rigetti Ankaa-9Q-3": (9, 1.0e-3, 8.0e-3, 6.6e-2, 40e-9, 70e-9, 21e-6, 24e-6),
    "IQM Garnet": (20, 8.0e-4, 4.9e-3, 1.9e-2, 20e-9, 40e-9, 50e-6, 8e-6),
    "IQM Helmi": (5, 3.8e-3, 3.9e-2, 4.8e-2, 120e-9, 120e-9, 36e-6, 17e-6),
    "IonQ Aria": (25, 6.0e-4, 6.0e-3, 4.8e-3, 135e-6, 600e-6, 100.0, 1.0),
    "Quantinuum H1": (20, 2.0e-5, 1.0e-3, 3.0e-3, 63e-6, 308e-6, 60.0, 4.0),
    "Quantinuum H2": (56, 3.0e-5, 1.5e-3, 1.5e-3, 63e-6, 308e-6, 60.0, 4.0),
}

_REG = {d.name: d for d in load_registry()}


def _stub(pricing):
    return replace(_REG["IBM Kyiv"], pricing=pricing)


def test_bundled_registry_matches_table(registry):
    assert [d.name for d in registry] == list(TABLE)
    for d in registry:
        want = TABLE[d.name]
        got = (d.qubits, d.e1, d.e2, d.em, d.t1, d.t2, d.T1, d.T2)
        assert got == pytest.approx(want, rel=1e-12), d.name
    h2 = registry[-1]
    assert h2.qubits == 56 and h2.e1 == 3.0e-5


def test_topologies(registry, device):
    helmi = device("IQM Helmi").coupling
    assert helmi.pairs == {(0, 3), (1, 3), (2, 3), (3, 4)}
    for d in registry:
        assert d.coupling.all_to_all == d.is_trapped_ion
        assert d.coupling.num_qubits == d.qubits
        if not d.coupling.all_to_all:
            # every fixed-topology chip is connected
            assert (d.coupling.distances >= 0).all(), d.name


def test_registry_round_trip(registry):
    assert parse_registry(registry_json(registry)) == registry


def test_schema_rejects_negative_error(registry):
    doc = registry_json(registry)
    doc["devices"][0]["e2"] = -0.01
    with pytest.raises(SchemaError) as ei:
        parse_registry(doc)
    assert "devices/0/e2" in str(ei.value)


@pytest.mark.parametrize("field, value", [("qubits", 0), ("t1", 0), ("em", 1.0), ("technology", "photonic")])
def test_schema_rejects_bad_fields(registry, field, value):
    doc = registry_json(registry)
    doc["devices"][3][field] = value
    with pytest.raises(SchemaError):
        parse_registry(doc)


def test_schema_rejects_out_of_range_pair(registry):
    doc = registry_json(registry)
    doc["devices"][5]["coupling"] = {"pairs": [[0, 9]]}
    with pytest.raises(SchemaError):
        parse_registry(doc)


def test_empty_registry_is_valid(tmp_path):
    p = tmp_path / "empty.json"
    p.write_text(json.dumps({"devices": []}))
    assert load_registry(p) == []


def test_invalid_json_registry(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{")
    with pytest.raises(SchemaError):
        load_registry(p)


# ---------------------------------------------------------------- estimators


def test_empty_circuit_estimates(registry):
    for d in registry:
        assert estimate_error(ResourceMetrics(), d) == 0.0
        assert estimate_time(ResourceMetrics(), d, Workload(1000, 50)) == 0.0


def test_sherbrooke_spot_value(device):
    d = device("IBM Sherbrooke")
    m = ResourceMetrics(N1=10, N2=5, Nm=4)
    exact = 1 - (1 - Fraction("2.2e-4")) ** 10 * (1 - Fraction("7.8e-3")) ** 5 * (1 - Fraction("1.3e-2")) ** 4
    assert estimate_error(m, d) == pytest.approx(float(exact), rel=1e-12)


def test_brisbane_time_spot_value(device):
    m = ResourceMetrics(D1Q=3, D2Q=2)
    assert estimate_time(m, device("IBM Brisbane"), Workload(1000, 50)) == pytest.approx(0.075, rel=1e-12)


def test_error_tends_to_one(device):
    d = device("IBM Kyiv")
    prev = 0.0
    for n2 in (1, 10, 100, 1000, 10000):
        e = estimate_error(ResourceMetrics(N2=n2), d)
        assert e > prev
        prev = e
    assert prev > 1 - 1e-12


def test_transport_dominated_time(device):
    h1 = device("Quantinuum H1")
    deep = ResourceMetrics(D1Q=10, D2Q=100)
    t = estimate_time(deep, h1, Workload(1, 1))
    assert 100 * h1.t2 / t > 0.97


def test_time_based_rate_example():
    # a $96/s rate over 0.0265 s of gate time
    assert estimate_cost(ResourceMetrics(), _stub(TimeBased(96.0)), Workload(1, 1), 0.0265) == pytest.approx(2.544)


def test_pricing_models():
    m = ResourceMetrics(N1=10, N2=4, Nm=2)
    wl = Workload(100, 5)
    assert estimate_cost(m, _stub(PerShot(0.3, 0.01)), wl, 0.0) == pytest.approx(0.3 + 0.01 * 500)
    assert estimate_cost(m, _stub(PerShot(0.3, 0.01, True)), wl, 0.0) == pytest.approx(5 * 0.3 + 0.01 * 500)
    op = PerOperation(0.001, 0.01, 0.005, min_charge=1.0)
    per_shot = 10 * 0.001 + 4 * 0.01 + 2 * 0.005
    assert estimate_cost(m, _stub(op), wl, 0.0) == pytest.approx(max(1.0, per_shot * 500))
    tiny = Workload(1, 1)
    assert estimate_cost(m, _stub(op), tiny, 0.0) == 1.0
    per_round = PerOperation(0.001, 0.01, 0.005, min_charge=1.0, per_iteration=True)
    assert estimate_cost(m, _stub(per_round), wl, 0.0) == pytest.approx(5 * max(1.0, per_shot * 100))


metrics = st.builds(ResourceMetrics, *(st.integers(0, 400) for _ in range(5)))


@given(metrics, st.sampled_from(list(TABLE)), st.sampled_from(["N1", "N2", "Nm"]), st.integers(1, 50))
def test_error_monotone(m, name, field, k):
    d = _REG[name]
    bumped = ResourceMetrics(**{**m.to_json(), field: getattr(m, field) + k})
    assert estimate_error(bumped, d) >= estimate_error(m, d)
    assert 0.0 <= estimate_error(m, d) <= 1.0


@given(metrics, st.sampled_from(list(TABLE)), st.integers(1, 5000), st.integers(1, 600), st.integers(2, 5))
def test_time_linear_in_shots_and_iterations(m, name, S, I, k):
    d = _REG[name]
    base = estimate_time(m, d, Workload(S, I))
    assert estimate_time(m, d, Workload(k * S, I)) == pytest.approx(k * base, rel=1e-12)
    assert estimate_time(m, d, Workload(S, k * I)) == pytest.approx(k * base, rel=1e-12)


@given(metrics, st.sampled_from(list(TABLE)), st.sampled_from(["N1", "N2", "Nm", "D1Q", "D2Q", "S", "I"]),
       st.integers(1, 50))
def test_cost_monotone(m, name, field, k):
    d = _REG[name]
    wl = Workload(100, 10)
    before = estimate(m, d, wl).P
    if field == "S":
        after = estimate(m, d, Workload(100 + k, 10)).P
    elif field == "I":
        after = estimate(m, d, Workload(100, 10 + k)).P
    else:
        after = estimate(ResourceMetrics(**{**m.to_json(), field: getattr(m, field) + k}), d, wl).P
    assert after >= before
