from __future__ import annotations

import re
from fractions import Fraction

import numpy as np
import pytest

from tfsr.graphcore import WeightedGraph

_CRITERIA: dict[int, tuple[str, str]] = {}


def random_triangle_free(rng: np.random.Generator, n: int, p: float = 0.5, weighted: bool = True) -> WeightedGraph:
    """Random triangle-free graph: edges proposed in random order, kept when no triangle forms."""
    adj = np.zeros((n, n), dtype=bool)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for k in rng.permutation(len(pairs)):
        u, v = pairs[k]
        if rng.random() < p and not (adj[u] & adj[v]).any():
            adj[u, v] = adj[v, u] = True
    if not weighted:
        return WeightedGraph(adj)
    raw = [int(x) for x in rng.integers(1, 10, size=n)]
    total = sum(raw)
    return WeightedGraph(adj, [Fraction(x, total) for x in raw])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _CRITERIA[n] = (status, m.group(2))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, name = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {name}")
