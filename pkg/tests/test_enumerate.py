from __future__ import annotations

import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eqlist.enumerate import (
    KNOWN_CONNECTED_COUNTS, canonical_form, connected_graphs, count_connected,
    graph_from_certificate, random_connected_graph,
)
from eqlist.graph import Graph

from conftest import graphs


def to_nx(G):
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges())
    return H


def permute(G: Graph, perm):
    return Graph.from_edges(G.n, [(perm[u], perm[v]) for u, v in G.edges()])


@pytest.mark.parametrize("n", range(1, 8))
def test_known_counts(n):
    assert count_connected(n) == KNOWN_CONNECTED_COUNTS[n]


@pytest.mark.slow
def test_known_count_8():
    assert count_connected(8) == 11117


def test_against_networkx_atlas():
    """The atlas lists every graph on up to 7 vertices."""
    for n in range(1, 8):
        ref = {canonical_form(Graph.from_edges(n, list(H.edges())))
               for H in nx.graph_atlas_g() if H.number_of_nodes() == n and nx.is_connected(H)}
        ours = {canonical_form(G) for G in connected_graphs(n)}
        assert ours == ref


@given(graphs(1, 9), st.randoms(use_true_random=False))
def test_canonical_form_invariant(G, rnd):
    perm = list(range(G.n))
    rnd.shuffle(perm)
    assert canonical_form(permute(G, perm)) == canonical_form(G)


@given(graphs(1, 7), graphs(1, 7))
def test_canonical_form_separates(G, H):
    same = canonical_form(G) == canonical_form(H)
    assert same == (G.n == H.n and nx.is_isomorphic(to_nx(G), to_nx(H)))


@given(graphs(1, 8))
def test_certificate_round_trip(G):
    cert = canonical_form(G)
    H = graph_from_certificate(cert)
    assert nx.is_isomorphic(to_nx(G), to_nx(H))


def test_stream_is_connected_and_deterministic():
    a = [G.adj for G in connected_graphs(6)]
    b = [G.adj for G in connected_graphs(6)]
    assert a == b
    assert all(G.is_connected() for G in connected_graphs(6))


def test_random_connected():
    rnd = random.Random(1)
    for n in range(1, 15):
        assert random_connected_graph(n, rnd).is_connected()
