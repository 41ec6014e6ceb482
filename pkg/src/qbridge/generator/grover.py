"""CNF phase oracles, diffusion, and the randomized Grover search loop."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..circuit import Circuit, invert_circuit
from ..errors import SearchExhausted, TooManyVariables
from ..qcf import CnfFormula, OracleQcf
from ..simulator import evolve, marginal_probabilities, StateVector
from .mcx import mcx, mcz

DEFAULT_MAX_INPUTS = 12
LAMBDA = 8 / 7


def _clause_literals(clause) -> tuple[list[int], bool]:
    """Deduplicated literals; second item is True for a tautological clause."""
    seen: dict[int, int] = {}
    for lit in clause:
        v = abs(lit)
        sign = 1 if lit > 0 else -1
        if v in seen and seen[v] != sign:
            return [], True
        seen[v] = sign
    return [v * s for v, s in seen.items()], False


def oracle_width(o: OracleQcf) -> int:
    return o.input_qubits + len(o.formula.clauses)


def build_oracle(o: OracleQcf, max_inputs: int = DEFAULT_MAX_INPUTS) -> Circuit:
    """Phase oracle over inputs 0..n-1 and one clause ancilla per clause after them."""
    f = o.formula
    n = f.num_vars
    if n > max_inputs:
        raise TooManyVariables(f"{n} oracle inputs exceed the bound of {max_inputs}")
    if not f.clauses:
        raise ValueError("oracle needs a non-empty formula")
    m = len(f.clauses)
    width = n + m
    compute = Circuit(width)
    everything = list(range(width))
    for j, clause in enumerate(f.clauses):
        anc = n + j
        lits, taut = _clause_literals(clause)
        if taut:
            compute.x(anc)
            continue
        qs = [abs(l) - 1 for l in lits]
        pos = [abs(l) - 1 for l in lits if l > 0]
        # OR(l) = NOT AND(NOT l): flip positive literals, AND into the ancilla, negate
        for q in pos:
            compute.x(q)
        mcx(compute, qs, anc, [q for q in everything if q not in qs and q != anc])
        compute.x(anc)
        for q in pos:
            compute.x(q)
    c = compute.copy()
    mcz(c, list(range(n, width)), list(range(n)))
    c.compose(invert_circuit(compute))
    return c


def build_diffusion(n: int, width: int | None = None) -> Circuit:
    """H^n (2|0><0| - I) H^n on qubits 0..n-1, up to global phase.

    Extra qubits up to `width` are only borrowed as idle helpers.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    width = n if width is None else width
    c = Circuit(width)
    for q in range(n):
        c.h(q)
        c.x(q)
    mcz(c, list(range(n)), list(range(n, width)))
    for q in range(n):
        c.x(q)
        c.h(q)
    return c


def build_grover_iteration(o: OracleQcf) -> Circuit:
    c = build_oracle(o)
    c.compose(build_diffusion(o.input_qubits, c.num_qubits))
    return c


def build_grover_circuit(o: OracleQcf, iterations: int = 1) -> Circuit:
    """Uniform preparation, `iterations` oracle+diffusion rounds, measurement of the inputs."""
    g = build_grover_iteration(o)
    c = Circuit(g.num_qubits)
    for q in range(o.input_qubits):
        c.h(q)
    for _ in range(iterations):
        c.compose(g)
    c.measure_all(range(o.input_qubits))
    return c


@dataclass
class GroverSchedule:
    n: int
    m: float = 1.0
    lam: float = LAMBDA

    def __post_init__(self):
        if not 1 < self.lam < 4 / 3:
            raise ValueError("lambda must lie in (1, 4/3)")

    @property
    def cap(self) -> int:
        return math.ceil(math.sqrt(2**self.n))

    def update(self) -> None:
        self.m = min(math.ceil(self.lam * self.m), self.cap)


@dataclass
class GroverRound:
    round: int
    m: float
    j: int
    outcome: str
    satisfied: bool


@dataclass
class GroverResult:
    bitstring: str
    iterations: int
    log: list[GroverRound] = field(default_factory=list)


class GroverRunner:
    """Caches the prepared state after j iterations so repeated rounds stay cheap."""

    def __init__(self, o: OracleQcf):
        self.o = o
        self.g = build_grover_iteration(o)
        self.width = self.g.num_qubits
        psi = np.zeros(1 << self.width, dtype=complex)
        psi[0] = 1.0
        prep = Circuit(self.width)
        for q in range(o.input_qubits):
            prep.h(q)
        evolve(psi, prep)
        self._states = [psi]

    def state(self, j: int) -> StateVector:
        while len(self._states) <= j:
            nxt = self._states[-1].copy()
            evolve(nxt, self.g)
            self._states.append(nxt)
        return StateVector(self.width, self._states[j])

    def input_distribution(self, j: int) -> np.ndarray:
        return marginal_probabilities(self.state(j), range(self.o.input_qubits))


def grover_search(
    o: OracleQcf,
    shots_per_round: int = 1,
    rng=None,
    max_rounds: int = 64,
    runner: GroverRunner | None = None,
) -> GroverResult:
    """Randomized schedule for an unknown number of solutions."""
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    runner = runner or GroverRunner(o)
    n = o.input_qubits
    sched = GroverSchedule(n)
    log: list[GroverRound] = []
    for r in range(max_rounds):
        j = int(rng.integers(0, int(sched.m))) if sched.m > 1 else 0
        p = runner.input_distribution(j)
        p = np.clip(p, 0, None)
        draws = rng.choice(p.size, size=shots_per_round, p=p / p.sum())
        for x in draws:
            x = int(x)
            sat = o.formula.evaluate(x)
            bits = format(x, f"0{n}b")
            log.append(GroverRound(r, sched.m, j, bits, sat))
            if sat:
                return GroverResult(bits, j, log)
        sched.update()
    raise SearchExhausted(f"no satisfying assignment after {max_rounds} rounds")
