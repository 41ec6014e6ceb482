"""End-to-end workflow: ingest, translate, generate, transpile, recommend, execute, decode."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .circuit import Circuit
from .decoder import Solution, decode_solution
from .devices import DeviceRecord, estimate, load_registry
from .errors import QBridgeError, UnsupportedTag
from .generator import (
    GroverRunner,
    build_arithmetic_circuit,
    build_grover_circuit,
    grover_search,
    prepared,
)
from .ingest import parse_json_spec, parse_spec_dict
from .problem import ARITH_TAGS, ArithmeticOperands, ProblemInstance, ProblemTag
from .qcf import (
    ORACLE_TAGS,
    QUBO_TAGS,
    build_arithmetic,
    build_cnf,
    build_qubo,
    qubo_to_ising,
    to_dimacs,
)
from .recommender import Ranking, RecommenderWeights, recommend, transpile_candidates
from .simulator import Counts, run_statevector, sample_counts
from .varloop import Qaoa, Vqe, Workload, run_variational, seeded_initial_params, variational_circuit

SCHEMA_VERSION = 1
ALGOS = ("auto", "qaoa", "vqe", "grover")
PROFILE_ITERS = {"default": 500, "quick": 50}


@dataclass(frozen=True)
class RunConfig:
    weights: RecommenderWeights = RecommenderWeights()
    shots: int = 1000
    iters: int | None = None  # None: the profile's default
    p: int = 3
    layers: int = 3
    algo: str = "auto"
    seed: int | None = None  # None: fresh entropy, echoed in the report
    devices: tuple[str, ...] | None = None
    profile: str = "default"
    registry: str | None = None

    @property
    def iterations(self) -> int:
        return self.iters if self.iters is not None else PROFILE_ITERS[self.profile]


class StageTimer:
    def __init__(self):
        self.seconds: dict[str, float] = {}

    @contextmanager
    def stage(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        except QBridgeError as e:
            # report where the failure happened, not just which module raised it
            if not hasattr(e, "pipeline_stage"):
                e.pipeline_stage = name.upper()
            raise
        finally:
            self.seconds[name] = self.seconds.get(name, 0.0) + time.perf_counter() - t0


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return int(seed)
    return int(np.random.SeedSequence().entropy % (1 << 32))


def select_devices(names, registry: list[DeviceRecord]) -> list[DeviceRecord]:
    """Exact (case-insensitive) names, or unique substrings of a registry name."""
    if not names:
        return list(registry)
    out = []
    for raw in names:
        key = raw.strip().lower()
        exact = [d for d in registry if d.name.lower() == key]
        hits = exact or [d for d in registry if key in d.name.lower()]
        if len(hits) != 1:
            known = ", ".join(d.name for d in registry)
            raise ValueError(f"device {raw!r} matches {len(hits)} registry entries (known: {known})")
        if hits[0] not in out:
            out.append(hits[0])
    return out


def choose_algorithm(tag: ProblemTag, algo: str) -> str:
    """auto: QAOA for QUBO problems, Grover for oracle-only problems, QFT circuits for arithmetic."""
    if algo not in ALGOS:
        raise ValueError(f"unknown algorithm {algo!r}")
    if tag in ARITH_TAGS:
        if algo not in ("auto",):
            raise UnsupportedTag(f"{tag.display} runs arithmetic circuits, not {algo}")
        return "arithmetic"
    if algo == "auto":
        return "qaoa" if tag in QUBO_TAGS else "grover"
    if algo in ("qaoa", "vqe") and tag not in QUBO_TAGS:
        raise UnsupportedTag(f"{tag.display} has no QUBO formulation for {algo}")
    if algo == "grover" and tag not in ORACLE_TAGS:
        raise UnsupportedTag(f"{tag.display} has no oracle formulation for Grover search")
    return algo


# ------------------------------------------------------------ translation


def translate(inst: ProblemInstance) -> dict[str, Any]:
    """Every QCF the tag supports."""
    out: dict[str, Any] = {}
    if inst.tag in QUBO_TAGS:
        out["qubo"] = build_qubo(inst)
    if inst.tag in ORACLE_TAGS:
        out["oracle"] = build_cnf(inst)
    if inst.tag in ARITH_TAGS:
        out["arithmetic"] = build_arithmetic(inst)
        if inst.tag != ProblemTag.MUL:
            out["reversible"] = build_arithmetic(inst, "reversible")
    if not out:
        raise UnsupportedTag(f"{inst.tag.display} has no quantum-compatible format")
    return out


def qcf_json(qcfs: dict[str, Any]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for name, q in qcfs.items():
        if name == "qubo":
            out["qubo"] = q.to_json()
            out["ising"] = qubo_to_ising(q).to_json()
        elif name == "oracle":
            f = q.formula
            out["oracle"] = {
                "num_vars": f.num_vars,
                "num_clauses": len(f.clauses),
                "max_clause_len": max((len(c) for c in f.clauses), default=0),
                "var_map": [list(v) if isinstance(v, tuple) else v for v in q.var_map],
                "dimacs": to_dimacs(f),
            }
        else:
            o: ArithmeticOperands = q.operands
            out[name] = {"op": q.op.display, "encoding": q.encoding, "a": o.a, "b": o.b,
                         "width_a": o.width_a, "width_b": o.width_b,
                         "width_c": o.product_width if q.op == ProblemTag.MUL else None,
                         "expected": q.expected()}
    return out


# ------------------------------------------------------------ generation


@dataclass
class Plan:
    """Circuits offered to the recommender and what is needed to execute each one."""

    algorithm: str
    circuits: dict[str, Circuit]  # bound circuits used for metrics
    qcf_for: dict[str, Any]
    extra: dict[str, Any] = field(default_factory=dict)


def generate(inst: ProblemInstance, qcfs: dict[str, Any], algorithm: str, cfg: RunConfig, seed: int) -> Plan:
    if algorithm in ("qaoa", "vqe"):
        qubo = qcfs["qubo"]
        spec = Qaoa(cfg.p) if algorithm == "qaoa" else Vqe(cfg.layers)
        circ = variational_circuit(qubo_to_ising(qubo), spec)
        x0 = seeded_initial_params(circ, spec, seed)
        cid = f"qaoa_p{cfg.p}" if algorithm == "qaoa" else f"vqe_l{cfg.layers}"
        return Plan(algorithm, {cid: circ.bind(x0)}, {cid: qubo}, {"spec": spec, "initial_params": x0})
    if algorithm == "grover":
        o = qcfs["oracle"]
        return Plan(algorithm, {"grover_j1": build_grover_circuit(o, 1)}, {"grover_j1": o})
    circuits, owners = {}, {}
    for name in ("arithmetic", "reversible"):
        if name not in qcfs:
            continue
        q = qcfs[name]
        ac = build_arithmetic_circuit(q.op, q.operands, q.encoding)
        cid = f"{q.encoding}_{q.op.display.lower()}"
        circuits[cid] = prepared(ac, q.operands)
        owners[cid] = q
    return Plan(algorithm, circuits, owners)


# ------------------------------------------------------------ execution


def execute(inst: ProblemInstance, plan: Plan, cid: str, cfg: RunConfig, seed: int) -> tuple[Counts, dict]:
    qcf = plan.qcf_for[cid]
    if plan.algorithm in ("qaoa", "vqe"):
        res = run_variational(qcf, plan.extra["spec"], Workload(cfg.shots, cfg.iterations), seed)
        info = {
            "optimizer": "spsa",
            "best_value": res.value,
            "initial_params": [float(x) for x in res.initial_params],
            "params": [float(x) for x in res.params],
            "trace": [[int(k), float(v)] for k, v in res.trace],
        }
        return res.counts, info
    rng = np.random.default_rng(seed)
    if plan.algorithm == "grover":
        runner = GroverRunner(qcf)
        found = grover_search(qcf, rng=rng, runner=runner)
        # the search proves a good iteration count exists; sample the full shot budget there
        circ_state = runner.state(found.iterations)
        counts = sample_counts(circ_state, range(qcf.input_qubits), cfg.shots, rng)
        info = {"iterations": found.iterations, "rounds": len({r.round for r in found.log}),
                "first_hit": found.bitstring}
        return counts, info
    circ = plan.circuits[cid]
    state = run_statevector(circ)
    return sample_counts(state, circ.measured_qubits, cfg.shots, rng), {"encoding": qcf.encoding}


# ------------------------------------------------------------ report


def device_table(cands, wl: Workload) -> list[dict]:
    rows = []
    for c in cands:
        row: dict[str, Any] = {"circuit": c.circuit_id, "device": c.device.name,
                               "technology": c.device.technology}
        if c.transpiled is None:
            row.update(transpiled=False, reason=c.failure)
        else:
            mb = estimate(c.transpiled.metrics, c.device, wl)
            row.update(transpiled=True, qubits_req=c.qubits_req, swaps=c.transpiled.swaps,
                       metrics=c.transpiled.metrics.to_json(), E=mb.E, T=mb.T, P=mb.P)
        rows.append(row)
    return rows


@dataclass
class RunResult:
    report: dict
    timings: dict[str, float]
    solution: Solution | None = None
    ranking: Ranking | None = None

    def to_json(self, with_timings: bool = True) -> dict:
        doc = dict(self.report)
        if with_timings:
            doc["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return doc


def load_spec(spec: str | Path | dict) -> tuple[dict, ProblemInstance]:
    if isinstance(spec, dict):
        return spec, parse_spec_dict(spec)
    text = Path(spec).read_text(encoding="utf-8")
    inst = parse_json_spec(text)
    return json.loads(text), inst


def run_pipeline(spec, cfg: RunConfig = RunConfig(), execute_circuit: bool = True) -> RunResult:
    """Full workflow; with execute_circuit=False it stops after the recommendation."""
    timer = StageTimer()
    seed = resolve_seed(cfg.seed)
    with timer.stage("ingest"):
        doc, inst = load_spec(spec)
    with timer.stage("qcf"):
        algorithm = choose_algorithm(inst.tag, cfg.algo)
        qcfs = translate(inst)
    with timer.stage("generate"):
        plan = generate(inst, qcfs, algorithm, cfg, seed)
    registry = load_registry(cfg.registry)
    devices = select_devices(cfg.devices, registry)
    variational = algorithm in ("qaoa", "vqe")
    wl = Workload(cfg.shots, cfg.iterations if variational else 1)
    with timer.stage("transpile"):
        cands = transpile_candidates(plan.circuits, devices)
    with timer.stage("recommend"):
        table = device_table(cands, wl)
        ranking = recommend(cands, cfg.weights, wl)

    report: dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "input": doc,
        "tag": inst.tag.display,
        "qcf": qcf_json(qcfs),
        "algorithm": algorithm,
        "circuits": {cid: {"qubits": c.num_qubits, "gates": len(c.ops)} for cid, c in plan.circuits.items()},
        "profile": {"profile": cfg.profile, "shots": cfg.shots, "iterations": wl.iterations,
                    "p": cfg.p if algorithm == "qaoa" else None, "algo": cfg.algo, "seed": seed,
                    "weights": [cfg.weights.lambda1, cfg.weights.lambda2, cfg.weights.lambda3],
                    "tau": cfg.weights.tau},
        "devices": table,
        "recommendation": ranking.to_json(),
    }
    solution = None
    if execute_circuit:
        cid = ranking.best.circuit_id
        with timer.stage("execute"):
            counts, info = execute(inst, plan, cid, cfg, seed)
        with timer.stage("decode"):
            solution = decode_solution(counts, inst, plan.qcf_for[cid])
        report["execution"] = {"backend": "statevector simulator", "circuit": cid,
                               "recommended_device": ranking.best.device, **info}
        report["solution"] = solution.to_json()
    return RunResult(report, timer.seconds, solution, ranking)


def dumps_report(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=False)


def error_stage(e: QBridgeError) -> str:
    return getattr(e, "pipeline_stage", e.stage)
