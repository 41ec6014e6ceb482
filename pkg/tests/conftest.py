import itertools
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qbridge.devices import load_registry
from qbridge.problem import GraphData, ProblemInstance, ProblemTag

settings.register_profile(
    "qbridge", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("qbridge")

ROOT = Path(__file__).resolve().parent.parent
SPECS = ROOT / "specs"
CORPUS = ROOT / "corpus"

PAW_EDGES = [(0, 1), (0, 2), (1, 2), (1, 3)]


def paw_graph() -> GraphData:
    return GraphData.from_edges(PAW_EDGES, 4)


def paw_mis() -> ProblemInstance:
    return ProblemInstance(ProblemTag.MIS, paw_graph())


def assignments(n: int):
    """Every n-bit assignment as a 0/1 tuple, bit i first."""
    return itertools.product((0, 1), repeat=n)


def bits_of(x: int, n: int) -> list[int]:
    return [(x >> i) & 1 for i in range(n)]


def random_graph(rng: np.random.Generator, n: int, p: float = 0.5) -> GraphData:
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return GraphData.from_edges(edges, n)


@pytest.fixture(scope="session")
def registry():
    return load_registry()


@pytest.fixture(scope="session")
def device(registry):
    by_name = {d.name: d for d in registry}
    return by_name.__getitem__


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
