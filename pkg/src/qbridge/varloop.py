"""SPSA and the QAOA / VQE optimisation loops."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .circuit import Circuit
from .generator.variational import (
    QaoaConfig,
    build_qaoa,
    build_vqe_ansatz,
    init_qaoa_params,
    init_vqe_params,
)
from .qcf import IsingModel, QuboQcf, qubo_to_ising
from .simulator import Counts, expectation_ising, run_statevector, sample_counts


@dataclass(frozen=True)
class SpsaConfig:
    max_iters: int = 500
    a: float | None = None  # None: calibrate so the first step is about `target_step`
    c: float = 0.1
    A: float | None = None  # None: 0.1 * max_iters
    alpha: float = 0.602
    gamma: float = 0.101
    seed: int | None = None
    target_step: float = 0.1
    calibration_samples: int = 5

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.c <= 0 or (self.a is not None and self.a <= 0):
            raise ValueError("gains a and c must be positive")


@dataclass(frozen=True)
class Workload:
    shots: int = 1000
    iterations: int = 500

    def __post_init__(self):
        if self.shots < 1 or self.iterations < 1:
            raise ValueError("shots and iterations must be >= 1")


@dataclass
class SpsaResult:
    x: np.ndarray
    value: float
    trace: list[tuple[int, float]]
    best_iter: int
    a: float


def spsa_minimize(
    objective: Callable[[np.ndarray], float],
    x0,
    cfg: SpsaConfig = SpsaConfig(),
    rng: np.random.Generator | None = None,
) -> SpsaResult:
    """Simultaneous-perturbation descent that reports the best evaluated iterate.

    Each step costs two perturbed evaluations plus one evaluation of the new
    iterate, which feeds the trace.
    """
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    x = np.array(x0, dtype=float)
    d = x.size
    A = 0.1 * cfg.max_iters if cfg.A is None else cfg.A

    a = cfg.a
    if a is None:
        mags = []
        for _ in range(cfg.calibration_samples):
            delta = rng.choice([-1.0, 1.0], size=d)
            diff = objective(x + cfg.c * delta) - objective(x - cfg.c * delta)
            mags.append(abs(diff) / (2 * cfg.c))
        avg = float(np.mean(mags)) if mags else 0.0
        a = cfg.target_step * (A + 1) ** cfg.alpha / avg if avg > 0 else cfg.target_step

    best_x = x.copy()
    best_v = float(objective(x))
    trace = [(0, best_v)]
    best_k = 0
    for k in range(cfg.max_iters):
        ak = a / (k + 1 + A) ** cfg.alpha
        ck = cfg.c / (k + 1) ** cfg.gamma
        delta = rng.choice([-1.0, 1.0], size=d)
        fp = objective(x + ck * delta)
        fm = objective(x - ck * delta)
        g = (fp - fm) / (2 * ck) / delta
        x = x - ak * g
        v = float(objective(x))
        trace.append((k + 1, v))
        if v < best_v:
            best_v, best_x, best_k = v, x.copy(), k + 1
    return SpsaResult(best_x, best_v, trace, best_k, a)


@dataclass(frozen=True)
class Qaoa:
    p: int = 3

    name = "qaoa"


@dataclass(frozen=True)
class Vqe:
    layers: int = 3

    name = "vqe"


@dataclass
class VariationalResult:
    counts: Counts
    params: np.ndarray
    value: float
    trace: list[tuple[int, float]]
    circuit: Circuit
    ising: IsingModel
    initial_params: np.ndarray = field(default_factory=lambda: np.zeros(0))


def variational_circuit(ising: IsingModel, algo: Qaoa | Vqe) -> Circuit:
    if isinstance(algo, Qaoa):
        return build_qaoa(ising, QaoaConfig(algo.p))
    c = build_vqe_ansatz(ising.n, algo.layers)
    c.measure_all()
    return c


def initial_params(algo: Qaoa | Vqe, n_params: int, rng) -> np.ndarray:
    if isinstance(algo, Qaoa):
        return init_qaoa_params(algo.p, rng).vector()
    return init_vqe_params(n_params, rng)


def seeded_initial_params(circ: Circuit, algo: Qaoa | Vqe, seed: int | None) -> np.ndarray:
    """Starting point run_variational uses for this seed (first spawned substream)."""
    s_init = np.random.SeedSequence(seed).spawn(3)[0]
    return initial_params(algo, len(circ.parameters), np.random.default_rng(s_init))


def run_variational(
    qcf: QuboQcf,
    algo: Qaoa | Vqe,
    wl: Workload = Workload(),
    seed: int | None = None,
    spsa: SpsaConfig | None = None,
) -> VariationalResult:
    ising = qubo_to_ising(qcf)
    circ = variational_circuit(ising, algo)
    _, s_pert, s_obj = np.random.SeedSequence(seed).spawn(3)
    x0 = seeded_initial_params(circ, algo, seed)
    obj_rng = np.random.default_rng(s_obj)
    measured = circ.measured_qubits
    cfg = spsa or SpsaConfig(max_iters=wl.iterations)

    best: dict = {"value": math.inf, "counts": None}

    def objective(theta: np.ndarray) -> float:
        state = run_statevector(circ, theta)
        counts = sample_counts(state, measured, wl.shots, obj_rng)
        v = expectation_ising(counts, ising)
        # remember the sample behind the lowest value so the reported value and counts agree
        if v < best["value"]:
            best.update(value=v, counts=counts, x=np.array(theta))
        return v

    res = spsa_minimize(objective, x0, cfg, np.random.default_rng(s_pert))
    counts = best["counts"]
    params = best["x"]
    value = best["value"]
    trace = list(res.trace)
    if value < res.value:
        # a perturbed evaluation beat every iterate; record it as a trace point
        trace.append((len(trace), value))
    return VariationalResult(counts, params, value, trace, circ, ising, x0)
