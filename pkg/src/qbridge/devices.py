"""Device registry and the error, time and cost estimators."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema

from .circuit import GateKind, ResourceMetrics
from .errors import SchemaError
from .transpiler import CNOT_BASIS, CZ_BASIS, CouplingMap
from .varloop import Workload

SUPERCONDUCTING = "superconducting"
TRAPPED_ION = "trapped_ion"


@dataclass(frozen=True)
class TimeBased:
    usd_per_second: float

    kind = "time_based"


@dataclass(frozen=True)
class PerShot:
    usd_per_task: float
    usd_per_shot: float
    task_per_iteration: bool = False  # each optimizer round is a separately billed task

    kind = "per_shot"


@dataclass(frozen=True)
class PerOperation:
    usd_per_1q: float
    usd_per_2q: float
    usd_per_measure: float
    min_charge: float = 0.0
    per_iteration: bool = False  # min_charge applies to each round instead of the whole run

    kind = "per_operation"


PricingModel = TimeBased | PerShot | PerOperation


@dataclass(frozen=True)
class DeviceRecord:
    name: str
    technology: str
    qubits: int
    e1: float
    e2: float
    em: float
    t1: float
    t2: float
    T1: float
    T2: float
    coupling: CouplingMap
    pricing: PricingModel

    @property
    def is_trapped_ion(self) -> bool:
        return self.technology == TRAPPED_ION

    @property
    def basis(self) -> frozenset[GateKind]:
        # IQM and Rigetti expose CZ as their native entangler
        if self.name.split()[0].lower() in ("iqm", "rigetti"):
            return CZ_BASIS
        return CNOT_BASIS


@dataclass(frozen=True)
class MetricBundle:
    E: float
    T: float
    P: float
    E_hat: float = 0.0
    T_hat: float = 0.0
    P_hat: float = 0.0

    def to_json(self) -> dict:
        return {"E": self.E, "T": self.T, "P": self.P,
                "E_hat": self.E_hat, "T_hat": self.T_hat, "P_hat": self.P_hat}


# ------------------------------------------------------------ estimators


def estimate_error(m: ResourceMetrics, d: DeviceRecord) -> float:
    log_survival = m.N1 * math.log1p(-d.e1) + m.N2 * math.log1p(-d.e2) + m.Nm * math.log1p(-d.em)
    return -math.expm1(log_survival)


def estimate_time(m: ResourceMetrics, d: DeviceRecord, wl: Workload) -> float:
    return (m.D1Q * d.t1 + m.D2Q * d.t2) * wl.shots * wl.iterations


def estimate_cost(m: ResourceMetrics, d: DeviceRecord, wl: Workload, T: float) -> float:
    p = d.pricing
    S, I = wl.shots, wl.iterations
    if isinstance(p, TimeBased):
        return p.usd_per_second * T
    if isinstance(p, PerShot):
        tasks = I if p.task_per_iteration else 1
        return p.usd_per_task * tasks + p.usd_per_shot * S * I
    per_shot = p.usd_per_1q * m.N1 + p.usd_per_2q * m.N2 + p.usd_per_measure * m.Nm
    if p.per_iteration:
        return I * max(p.min_charge, per_shot * S)
    return max(p.min_charge, per_shot * S * I)


def estimate(m: ResourceMetrics, d: DeviceRecord, wl: Workload) -> MetricBundle:
    E = estimate_error(m, d)
    T = estimate_time(m, d, wl)
    return MetricBundle(E, T, estimate_cost(m, d, wl, T))


# ------------------------------------------------------------ registry

_NONNEG = {"type": "number", "minimum": 0}
_PROB = {"type": "number", "minimum": 0, "exclusiveMaximum": 1}
_POS = {"type": "number", "exclusiveMinimum": 0}

REGISTRY_SCHEMA = {
    "type": "object",
    "required": ["devices"],
    "properties": {
        "devices": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["name", "technology", "qubits", "e1", "e2", "em",
                             "t1", "t2", "T1", "T2", "coupling", "pricing"],
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "technology": {"enum": [SUPERCONDUCTING, TRAPPED_ION]},
                    "qubits": {"type": "integer", "minimum": 1},
                    "e1": _PROB, "e2": _PROB, "em": _PROB,
                    "t1": _POS, "t2": _POS, "T1": _NONNEG, "T2": _NONNEG,
                    "coupling": {
                        "oneOf": [
                            {"type": "object", "required": ["all_to_all"],
                             "properties": {"all_to_all": {"const": True}},
                             "additionalProperties": False},
                            {"type": "object", "required": ["pairs"],
                             "properties": {"pairs": {"type": "array", "items": {
                                 "type": "array", "items": {"type": "integer", "minimum": 0},
                                 "minItems": 2, "maxItems": 2}}},
                             "additionalProperties": False},
                        ]
                    },
                    "pricing": {
                        "oneOf": [
                            {"type": "object", "additionalProperties": False,
                             "required": ["model", "usd_per_second"],
                             "properties": {"model": {"const": "time_based"},
                                            "usd_per_second": _NONNEG}},
                            {"type": "object", "additionalProperties": False,
                             "required": ["model", "usd_per_task", "usd_per_shot"],
                             "properties": {"model": {"const": "per_shot"},
                                            "usd_per_task": _NONNEG, "usd_per_shot": _NONNEG,
                                            "task_per_iteration": {"type": "boolean"}}},
                            {"type": "object", "additionalProperties": False,
                             "required": ["model", "usd_per_1q", "usd_per_2q", "usd_per_measure"],
                             "properties": {"model": {"const": "per_operation"},
                                            "usd_per_1q": _NONNEG, "usd_per_2q": _NONNEG,
                                            "usd_per_measure": _NONNEG, "min_charge": _NONNEG,
                                            "per_iteration": {"type": "boolean"}}},
                        ]
                    },
                },
            },
        }
    },
}


def _pricing(raw: dict) -> PricingModel:
    args = {k: v for k, v in raw.items() if k != "model"}
    return {"time_based": TimeBased, "per_shot": PerShot, "per_operation": PerOperation}[raw["model"]](**args)


def _pricing_json(p: PricingModel) -> dict:
    from dataclasses import asdict

    return {"model": p.kind, **asdict(p)}


def _error_path(err: jsonschema.ValidationError) -> tuple[str, str]:
    # oneOf failures hide the useful message in the best-matching sub-error
    best = jsonschema.exceptions.best_match([err]) if err.context else err
    path = "/".join(str(p) for p in best.absolute_path)
    return path or "<root>", best.message


def parse_registry(doc: dict) -> list[DeviceRecord]:
    validator = jsonschema.Draft202012Validator(REGISTRY_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        path, msg = _error_path(errors[0])
        raise SchemaError(path, msg)
    out = []
    for i, rec in enumerate(doc["devices"]):
        cpl = rec["coupling"]
        try:
            if cpl.get("all_to_all"):
                cm = CouplingMap.full(rec["qubits"])
            else:
                cm = CouplingMap(rec["qubits"], frozenset(tuple(p) for p in cpl["pairs"]))
        except ValueError as e:
            raise SchemaError(f"devices/{i}/coupling", str(e)) from None
        out.append(
            DeviceRecord(
                name=rec["name"], technology=rec["technology"], qubits=rec["qubits"],
                e1=rec["e1"], e2=rec["e2"], em=rec["em"], t1=rec["t1"], t2=rec["t2"],
                T1=rec["T1"], T2=rec["T2"], coupling=cm, pricing=_pricing(rec["pricing"]),
            )
        )
    return out


def load_registry(path: str | Path | None = None) -> list[DeviceRecord]:
    """Load a registry file; without a path the bundled default is used."""
    if path is None:
        text = resources.files("qbridge.data").joinpath("devices.json").read_text()
    else:
        text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("<root>", f"invalid JSON: {e}") from None
    return parse_registry(doc)


def registry_json(devices: list[DeviceRecord]) -> dict:
    recs = []
    for d in devices:
        cpl = {"all_to_all": True} if d.coupling.all_to_all else {"pairs": [list(p) for p in sorted(d.coupling.pairs)]}
        recs.append({
            "name": d.name, "technology": d.technology, "qubits": d.qubits,
            "e1": d.e1, "e2": d.e2, "em": d.em, "t1": d.t1, "t2": d.t2,
            "T1": d.T1, "T2": d.T2, "coupling": cpl, "pricing": _pricing_json(d.pricing),
        })
    return {"devices": recs}
