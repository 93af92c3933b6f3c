from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from eqlist.graph import Graph

settings.register_profile(
    "default", deadline=None, max_examples=100,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n: int = 0, max_n: int = 10, connected: bool = False, p=None):
    n = draw(st.integers(min_n, max_n))
    edges = set()
    if connected and n > 1:
        for v in range(1, n):
            edges.add((draw(st.integers(0, v - 1)), v))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if pairs:
        dens = draw(st.floats(0.0, 0.7)) if p is None else p
        mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
        # thin the boolean draw by the density so sparse graphs are common
        thin = draw(st.randoms(use_true_random=False))
        for e, b in zip(pairs, mask):
            if b and thin.random() < dens:
                edges.add(e)
    return Graph.from_edges(n, sorted(edges))


@st.composite
def graph_and_subset(draw, min_n: int = 1, max_n: int = 10, **kw):
    G = draw(graphs(min_n, max_n, **kw))
    A = draw(st.integers(0, (1 << G.n) - 1))
    return G, A


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    from _acceptance_log import LINES
    if not LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(LINES):
        terminalreporter.write_line(LINES[number])
