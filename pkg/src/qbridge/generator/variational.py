"""QAOA and two-local VQE circuits with their parameter initializers."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..circuit import Circuit, Param
from ..qcf import IsingModel


@dataclass(frozen=True)
class QaoaConfig:
    p: int = 3

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("QAOA needs p >= 1")


@dataclass(frozen=True)
class QaoaParams:
    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def vector(self) -> np.ndarray:
        return np.array(self.gammas + self.betas)

    @classmethod
    def from_vector(cls, v) -> QaoaParams:
        v = [float(x) for x in v]
        p = len(v) // 2
        return cls(tuple(v[:p]), tuple(v[p:]))


def build_qaoa(ising: IsingModel, cfg: QaoaConfig = QaoaConfig()) -> Circuit:
    """Symbolic QAOA circuit; slots are gamma_0..gamma_{p-1} then beta_0..beta_{p-1}.

    The cost layer implements exp(-i*gamma*H) for H = -sum J s_i s_j - sum h s_i.
    With s = 2x - 1 a spin is -Z, so couplings get RZZ(-2*gamma*J) and fields RZ(+2*gamma*h).
    """
    n = ising.n
    c = Circuit(n)
    c.parameters.update({f"gamma_{k}": k for k in range(cfg.p)})
    c.parameters.update({f"beta_{k}": cfg.p + k for k in range(cfg.p)})
    for q in range(n):
        c.h(q)
    for k in range(cfg.p):
        g = Param(f"gamma_{k}")
        for (i, j), J in sorted(ising.J.items()):
            if J == 0:
                continue
            c.cx(i, j)
            c.rz(j, g * (-2.0 * J))
            c.cx(i, j)
        for i, h in enumerate(ising.h):
            if h != 0:
                c.rz(i, g * (2.0 * h))
        b = Param(f"beta_{k}")
        for q in range(n):
            c.rx(q, b * 2.0)
    c.measure_all()
    return c


def init_qaoa_params(p: int, rng) -> QaoaParams:
    if p < 1:
        raise ValueError("p must be >= 1")
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    gammas = rng.uniform(0.0, math.pi, size=p)
    betas = rng.uniform(0.0, math.pi / 2, size=p)
    return QaoaParams(tuple(map(float, gammas)), tuple(map(float, betas)))


def build_vqe_ansatz(n: int, layers: int = 3) -> Circuit:
    """RY layer + all-pairs CZ, `layers` times, then a closing RY layer (no measurement)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    c = Circuit(n)
    slot = 0

    def ry_layer():
        nonlocal slot
        for q in range(n):
            c.ry(q, Param(f"theta_{slot}"))
            slot += 1

    for _ in range(layers):
        ry_layer()
        for a, b in itertools.combinations(range(n), 2):
            c.cz(a, b)
    ry_layer()
    return c


def init_vqe_params(count: int, rng, scale: float = 0.1) -> np.ndarray:
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    return rng.uniform(-scale, scale, size=count)
