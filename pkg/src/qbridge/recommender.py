"""Feasibility filtering, normalised weighted scoring and ranking of circuit-device pairs."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .circuit import Circuit
from .devices import DeviceRecord, MetricBundle, estimate
from .errors import CircuitTooLarge, NoCompatiblePair, TranspileError
from .transpiler import TranspiledCircuit, check_legal, transpile
from .varloop import Workload


@dataclass(frozen=True)
class RecommenderWeights:
    lambda1: float = 0.6
    lambda2: float = 0.3
    lambda3: float = 0.1
    tau: float = 0.5
    delta: float = 0.05

    def __post_init__(self):
        lams = (self.lambda1, self.lambda2, self.lambda3)
        if min(lams) < 0 or abs(sum(lams) - 1.0) > 1e-9:
            raise ValueError("lambda weights must be non-negative and sum to 1")
        if not 0 <= self.tau <= 1:
            raise ValueError("tau must lie in [0, 1]")


@dataclass
class Candidate:
    circuit_id: str
    device: DeviceRecord
    transpiled: TranspiledCircuit | None
    failure: str | None = None  # transpilation failure message

    @property
    def qubits_req(self) -> int:
        return self.transpiled.qubits_used if self.transpiled else 0


@dataclass(frozen=True)
class RankedPair:
    circuit_id: str
    device: str
    technology: str
    qubits_req: int
    metrics: MetricBundle
    score: float

    def to_json(self) -> dict:
        return {"circuit": self.circuit_id, "device": self.device, "technology": self.technology,
                "qubits_req": self.qubits_req, **self.metrics.to_json(), "score": self.score}


@dataclass
class Ranking:
    entries: list[RankedPair]
    rejected: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def best(self) -> RankedPair:
        return self.entries[0]

    def to_json(self) -> dict:
        return {
            "best": self.best.to_json() if self.entries else None,
            "ranking": [e.to_json() for e in self.entries],
            "rejected": [{"circuit": c, "device": d, "reason": r} for c, d, r in self.rejected],
        }


def transpile_candidates(
    circuits: Mapping[str, Circuit], devices: Sequence[DeviceRecord], workers: int = 4
) -> list[Candidate]:
    """Transpile every logical circuit onto every device, keeping failures as candidates."""
    jobs = [(cid, c, d) for cid, c in circuits.items() for d in devices]

    def one(job):
        cid, c, d = job
        try:
            return Candidate(cid, d, transpile(c, d))
        except CircuitTooLarge as e:
            return Candidate(cid, d, None, f"qubit capacity: {e}")
        except TranspileError as e:
            return Candidate(cid, d, None, f"transpilation failed: {e}")

    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(workers) as ex:
            return list(ex.map(one, jobs))
    return [one(j) for j in jobs]


def _normalise(values: list[float]) -> list[float]:
    m = max(values, default=0.0)
    return [v / m if m > 0 else 0.0 for v in values]


def recommend(
    candidates: Sequence[Candidate],
    weights: RecommenderWeights = RecommenderWeights(),
    wl: Workload = Workload(),
) -> Ranking:
    feasible: list[tuple[Candidate, MetricBundle]] = []
    rejected: list[tuple[str, str, str]] = []
    for cand in candidates:
        d = cand.device
        if cand.transpiled is None:
            rejected.append((cand.circuit_id, d.name, cand.failure or "not transpiled"))
            continue
        if cand.qubits_req > d.qubits:
            rejected.append((cand.circuit_id, d.name, f"qubit capacity: needs {cand.qubits_req}, has {d.qubits}"))
            continue
        if check_legal(cand.transpiled, d.coupling, d.basis):
            rejected.append((cand.circuit_id, d.name, "gate set incompatible"))
            continue
        mb = estimate(cand.transpiled.metrics, d, wl)
        if 1 - mb.E < weights.tau:
            rejected.append(
                (cand.circuit_id, d.name, f"fidelity {1 - mb.E:.4f} below threshold {weights.tau}")
            )
            continue
        feasible.append((cand, mb))
    if not feasible:
        raise NoCompatiblePair([f"{c} on {d}: {r}" for c, d, r in rejected])

    E = _normalise([mb.E for _, mb in feasible])
    T = _normalise([mb.T for _, mb in feasible])
    P = _normalise([mb.P for _, mb in feasible])
    w = weights
    entries = []
    for (cand, mb), e, t, p in zip(feasible, E, T, P):
        score = w.lambda1 * e + w.lambda2 * t + w.lambda3 * p
        if cand.device.is_trapped_ion and (w.lambda1 >= 0.8 or cand.qubits_req > 10):
            score -= w.delta
        entries.append(
            RankedPair(cand.circuit_id, cand.device.name, cand.device.technology, cand.qubits_req,
                       replace(mb, E_hat=e, T_hat=t, P_hat=p), score)
        )
    entries.sort(key=lambda r: (r.score, r.metrics.E_hat, r.metrics.P_hat, r.metrics.T_hat,
                                r.circuit_id, r.device))
    return Ranking(entries, rejected)
