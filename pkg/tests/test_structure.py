from __future__ import annotations

import random

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from eqlist.coloring import is_SE, random_lists
from eqlist.graph import (
    Graph, complete_bipartite, complete_graph, cycle_graph, disjoint_union, mask_of, members,
    path_graph, popcount, star,
)
from eqlist.structure import (
    ContractError, classify_bug, core_buffer, find_threads, fork_roots, good_string, inventory,
    maximal_bug, tagged_bug, two_core,
)

from conftest import graphs


# -- threads -------------------------------------------------------------------

def test_thread_examples():
    th = find_threads(complete_bipartite(2, 3))
    assert len(th) == 3 and all(t.kind == "plain" and t.t == 1 for t in th)
    assert all(t.root == 0 and t.end == 1 for t in th)
    th = find_threads(star(5))
    assert len(th) == 5 and all(t.kind == "loose" and t.t == 1 and t.root == 0 for t in th)
    assert find_threads(cycle_graph(6)) == []


def test_zero_threads():
    th = find_threads(complete_graph(4))
    assert len(th) == 6 and all(t.t == 0 and t.kind == "plain" for t in th)


def test_closed_thread():
    G = Graph.from_edges(5, [(0, 1), (1, 2), (2, 0), (0, 3), (0, 4)])
    closed = [t for t in find_threads(G) if t.kind == "closed"]
    assert len(closed) == 1 and closed[0].t == 2 and closed[0].path == (0, 1, 2, 0)


@given(graphs(1, 12))
def test_thread_invariants(G):
    threads = find_threads(G)
    used = set()
    for t in threads:
        assert G.degree(t.root) >= 3
        assert all(G.degree(v) == 2 for v in t.path[1:-1])
        if t.kind == "plain":
            assert G.degree(t.end) >= 3 and t.path[0] <= t.path[-1]
        elif t.kind == "loose":
            assert G.degree(t.end) == 1
        else:
            assert t.end == t.root
        assert t.t == sum(1 for v in set(t.path) if G.degree(v) < 3)
        edges = {frozenset(e) for e in zip(t.path, t.path[1:])}
        assert not (edges & used)
        used |= edges
    covered = {v for t in threads for v in t.interior}
    for v in range(G.n):
        if G.degree(v) == 2 and any(G.degree(w) >= 3 for w in members(G.component_of(v))):
            assert v in covered


# -- bugs ------------------------------------------------------------------------

def test_bug_examples():
    B = maximal_bug(star(5), 0)
    assert (B.size, B.lam, B.pi) == (6, 0, 5)
    B = maximal_bug(complete_bipartite(2, 3), 0)
    assert (B.size, B.lam, B.pi) == (4, 0, 0)
    assert B.legs == frozenset({2, 3, 4})


def test_bug_with_pendant_path_on_cycle():
    G = cycle_graph(6).add_edges([(0, 6), (6, 7)], extra_vertices=2)
    B = maximal_bug(G, 0)
    assert {6, 7} <= B.body
    # the rest of the cycle is a closed thread at the root, hence body as well
    assert B.pi == 7 and B.body == frozenset(range(1, 8))


def _k4_block(offset):
    return [(offset + i, offset + j) for i in range(4) for j in range(i + 1, 4)]


def test_wishbone():
    # root 0 of degree 4: closed 2-thread 0-1-2-0 and legs 0-3-5, 0-4-6 into a K4
    edges = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 5), (0, 4), (4, 6)] + _k4_block(5)
    G = Graph.from_edges(9, edges)
    B = tagged_bug(G, 0, 4)
    assert (B.size, B.lam, B.pi, B.tag.name) == (5, 0, 2, "wishbone")


def test_jellyfish():
    edges = [(0, 1), (0, 2), (2, 5), (0, 3), (3, 6), (0, 4), (4, 7)] + _k4_block(5)
    G = Graph.from_edges(9, edges)
    B = tagged_bug(G, 0, 4)
    assert (B.size, B.lam, B.pi, B.tag.name) == (5, 0, 1, "jellyfish")


def test_fork():
    edges = [(0, 1), (0, 2), (0, 3), (3, 4), (4, 5), (1, 6), (2, 7), (5, 6), (5, 7), (6, 7)]
    G = Graph.from_edges(8, edges)
    B = tagged_bug(G, 0, 4)
    assert (B.size, B.lam, B.pi) == (5, 1, 0)
    assert str(B.tag) == "fork(3)"
    assert 0 in fork_roots(G, 4)
    assert tagged_bug(G, 0, 3).tag.name == "fork"


def test_classify_requires_maximal():
    B = maximal_bug(star(5), 0)
    from dataclasses import replace
    with pytest.raises(ContractError):
        classify_bug(star(5), replace(B, vertices=frozenset({0, 1})), 3)


def _thread_context_ok(G, B):
    """The thread shapes allowed around a root: loose t=1, plain t<=2, closed t=2."""
    for w in B.walks:
        if w.kind == "loose" and w.t != 1:
            return False
        if w.kind == "plain" and w.t > 2:
            return False
        if w.kind == "closed" and w.t != 2:
            return False
    return True


@given(graphs(1, 12))
def test_bug_invariants(G):
    for r in range(G.n):
        if G.degree(r) < 3:
            continue
        B = maximal_bug(G, r)
        bm = mask_of(B.vertices)
        assert G.component_of(r, bm) == bm
        assert all(G.degree(v) < 3 for v in B.vertices if v != r)
        assert not (B.legs & B.body) and (B.legs | B.body) == B.vertices - {r}
        assert B.pi == len(B.body)
        assert B.lam == sum(1 for w in B.walks if w.kind == "plain" and w.t == 2)
        if _thread_context_ok(G, B):
            assert B.size <= 2 * G.degree(r) + 1 - B.pi
        tag = classify_bug(G, B, 3)
        if tag.name == "fork":
            assert B.size == G.degree(r) + 2 and B.lam == 1 and B.pi == 0


def test_inventory_shape():
    inv = inventory(star(5), 3)
    assert len(inv["threads"]) == 5 and inv["bugs"][0]["size"] == 6
    assert inv["fork_roots"] == []


# -- core and buffer ----------------------------------------------------------------

def test_core_buffer_tree():
    G = disjoint_union(star(3), path_graph(4))   # B = the star; G0 a path (tree)
    cb = core_buffer(G, range(4))
    assert len(cb.core) == 1
    assert cb.buffer_vertices == frozenset(range(4, 8))


def test_core_buffer_cycle():
    G = disjoint_union(star(3), cycle_graph(5))
    cb = core_buffer(G, range(4))
    assert cb.core == frozenset(range(4, 9))
    assert cb.buffer_vertices == frozenset()


def test_core_buffer_cycle_with_pendant():
    C = cycle_graph(5).add_edges([(0, 5), (5, 6)], extra_vertices=2)
    # K3 = vertices 0..2 is B; the pendant end 9 touches B so G has no leaf
    G = disjoint_union(complete_graph(3), C).add_edges([(0, 9)])
    cb = core_buffer(G, range(3))
    assert cb.leaf is None
    assert cb.core == frozenset(range(3, 8))
    assert cb.buffer_vertices == frozenset({3, 8, 9})
    # with a genuine G-leaf at the end of the path, the path joins the core
    G2 = disjoint_union(complete_graph(3), C)
    assert core_buffer(G2, range(3)).core == frozenset(range(3, 10))


def _forest_checks(G, cb):
    H = mask_of(cb.core)
    F = mask_of(cb.buffer_vertices)
    adj = {v: 0 for v in members(F)}
    for u, v in cb.buffer_edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    Fg = Graph(G.n, [adj.get(v, 0) for v in range(G.n)])
    comps = Fg.components(F)
    assert len(cb.buffer_edges) == popcount(F) - len(comps)     # acyclic
    for c in comps:
        assert popcount(c & H) == 1
    for v in members(H):
        dH = popcount(G.adj[v] & H)
        assert dH == 0 or dH >= 2 or v == cb.leaf or popcount(H) <= 2


@given(graphs(2, 11), st.data())
def test_core_buffer_invariants(G, data):
    B = data.draw(st.integers(1, G.full_mask)) & G.full_mask
    g0 = G.full_mask & ~B
    assume(g0)
    cb = core_buffer(G, members(B))
    H = mask_of(cb.core)
    assert H & ~g0 == 0
    assert (mask_of(cb.buffer_vertices) | H) == g0
    _forest_checks(G, cb)


def test_two_core():
    G = cycle_graph(5).add_edges([(0, 5), (5, 6)], extra_vertices=2)
    assert two_core(G, G.full_mask) == mask_of(range(5))


# -- good strings --------------------------------------------------------------------

def test_good_string_k23_pendant():
    G = complete_bipartite(2, 3).add_edges([(0, 5), (5, 6)], extra_vertices=2)
    gs = good_string(G, {5, 6}, None, 3)
    assert gs.Q == frozenset()
    assert set(gs.coloring) == set(range(5))
    H, parent = G.induced(range(5))
    assert is_SE(H, 3, None, {i: gs.coloring[p] for i, p in enumerate(parent)})


def test_good_string_component():
    G = disjoint_union(star(3), cycle_graph(4))
    gs = good_string(G, range(4), None, 3)
    assert gs.Q == frozenset() and set(gs.coloring) == set(range(4, 8))


def test_good_string_defers_leaf():
    # B = K_{1,3} rooted at 0; its leaf 3 touches vertex 4, which hangs off the core cycle
    edges = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 5)]
    G = Graph.from_edges(9, edges)
    gs = good_string(G, {0, 1, 2, 3}, None, 3)
    assert gs.Q == frozenset({4})
    assert ("defer", (4,)) in gs.steps


@given(graphs(3, 11), st.data())
def test_good_string_invariants(G, data):
    roots = [r for r in range(G.n) if G.degree(r) >= 3]
    assume(roots)
    r = data.draw(st.sampled_from(roots))
    B = maximal_bug(G, r)
    k = data.draw(st.sampled_from([3, 4]))
    rnd = data.draw(st.randoms(use_true_random=False))
    L = random_lists(G.n, k, rnd, pool=rnd.randint(k, k + 2))
    gs = good_string(G, B, L, k)
    if gs is None:
        return
    Q = mask_of(gs.Q)
    assert all(G.adj[q] & Q == 0 for q in gs.Q)                         # independent
    assert not (gs.Q & gs.core.core)
    assert gs.Q <= gs.core.buffer_vertices
    rest = G.full_mask & ~mask_of(B.vertices) & ~Q
    assert set(gs.coloring) == set(members(rest))
    H, parent = G.induced(rest)
    f = {i: gs.coloring[p] for i, p in enumerate(parent)}
    assert is_SE(H, k, [L[p] for p in parent], f)
