from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqlist.discharge import apply_rules, audit, initial_charges, table_row
from eqlist.enumerate import random_connected_graph, random_graph
from eqlist.graph import Graph, complete_graph, members, path_graph, star
from eqlist.potential import max_potential, potential_of_subset
from eqlist.structure import fork_roots

from conftest import graph_and_subset


def fork_graph():
    edges = [(0, 1), (0, 2), (0, 3), (3, 4), (4, 5), (1, 6), (2, 7), (5, 6), (5, 7), (6, 7)]
    return Graph.from_edges(8, edges)


def test_initial_charge_examples():
    led = initial_charges(path_graph(2), 3)
    assert led.vertex == [-8, -8]              # -7 + 3, in half-units
    led = initial_charges(complete_graph(4), 4)
    assert set(led.vertex) == {-10} and set(led.edge.values()) == {8}
    assert led.total == 2 * 4 == 2 * potential_of_subset(complete_graph(4), 4, range(4))


def test_rules_examples():
    K4 = complete_graph(4)
    assert apply_rules(K4, 4, range(4)).vertex == initial_charges(K4, 4).vertex
    assert apply_rules(K4, 4, []).vertex == [2, 2, 2, 2]
    led = apply_rules(star(5), 3, [])
    assert led.vertex[1:] == [0] * 5
    assert all(c == 0 for c in led.edge.values())


def test_audit_examples():
    rep = audit(complete_graph(4), 4, [])
    assert rep.identity_holds and rep.conserved
    row = rep.per_vertex[0]
    assert row.status == "pass" and row.bound_halves == 0 and row.charge_halves == 2
    assert row.table_row["d"] == 3
    G = star(5)
    rep = audit(G, 3, range(6))
    assert rep.identity_lhs == rep.identity_rhs == 2 * potential_of_subset(G, 3, range(6))
    assert rep.per_vertex == ()
    rep = audit(fork_graph(), 4, [])
    assert not rep.claim_applies
    assert {"kind": "fork_root_outside_Y", "vertex": 0} in rep.violations
    assert all(a.status == "out_of_scope" for a in rep.per_vertex)


def test_table_rows():
    assert table_row(3, 3, 0) == (4, 1)
    assert table_row(3, 5, 1) == (10, 6)
    assert table_row(4, 3, 0) == (3, 0)
    assert table_row(4, 4, 1) == (4, 2)          # mu >= 1 for d(v) = 4
    assert table_row(4, 6, 0) == (13, 2)
    with pytest.raises(ValueError):
        table_row(5, 3, 0)


@given(graph_and_subset(1, 12), st.sampled_from([3, 4]))
def test_conservation_and_identity(data, k):
    G, Y = data
    rep = audit(G, k, members(Y))
    assert rep.conserved and rep.identity_holds
    led = apply_rules(G, k, members(Y))
    for (u, v), c in led.edge.items():
        inside = Y >> u & 1 and Y >> v & 1
        assert c == (initial_charges(G, k).edge[(u, v)] if inside else 0)
    for v in members(Y):
        assert led.vertex[v] == initial_charges(G, k).vertex[v]


@settings(max_examples=200)
@given(st.integers(0, 10 ** 9))
def test_nonnegativity_in_scope(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 14)
    k = rng.choice([3, 4])
    G = random_connected_graph(n, rng, rng.uniform(0, 0.4))
    Y = set(fork_roots(G, k)) | set(max_potential(G, k).extreme_union)
    rep = audit(G, k, Y)
    assert rep.claim_applies
    assert not rep.failures
    for a in rep.per_vertex:
        if a.status == "pass":
            assert a.bound_halves >= 0 and a.charge_halves >= a.bound_halves


def test_r5_flows_away_from_Y():
    # path 0-1-2-3 with Y = {0}: vertex 1 (degree 2, next to Y) sends 2 halves to 2
    G = path_graph(4)
    led = apply_rules(G, 3, [0])
    assert ("R5", 1, 2, 2) in led.log
    assert led.total == initial_charges(G, 3).total
