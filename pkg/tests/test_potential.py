from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eqlist.graph import (
    Graph, complete_bipartite, complete_graph, cycle_graph, members, path_graph, popcount, star,
)
from eqlist.potential import (
    check_sparseness, check_supermodularity, max_average_degree, max_potential, mod_star, params,
    potential_of_subset, sigma,
)

from conftest import graph_and_subset, graphs


def rho_oracle(G: Graph, k: int, A: int) -> int:
    """Formula evaluated from scratch (no shared code with the package)."""
    eps, nu = {3: (6, 7), 4: (4, 5)}[k]
    verts = [v for v in range(G.n) if A >> v & 1]
    e = sum(1 for u, v in G.edges() if A >> u & 1 and A >> v & 1)
    leaves = sum(1 for v in verts if len(G.neighbors(v)) == 1)
    return eps * e - nu * len(verts) + (eps // 2) * leaves


def all_maximisers(G: Graph, k: int):
    vals = [rho_oracle(G, k, A) for A in range(1 << G.n)]
    best = max(vals)
    return best, [A for A, x in enumerate(vals) if x == best]


# -- parameters and small arithmetic -----------------------------------------

def test_params():
    for k, (e, n) in {3: (6, 7), 4: (4, 5)}.items():
        p = params(k)
        assert (p.epsilon, p.nu, p.delta) == (e, n, 1)
        assert p.nu == p.epsilon + 1
    with pytest.raises(ValueError):
        params(5)


def test_mod_star_examples():
    assert mod_star(6, 3) == 3
    assert mod_star(7, 3) == 1
    assert mod_star(4, 3) == 1
    with pytest.raises(ValueError):
        mod_star(3, 0)


@given(st.integers(0, 500), st.integers(1, 12))
def test_mod_star_range(n, k):
    m = mod_star(n, k)
    assert 1 <= m <= k and (n - m) % k == 0


def test_sigma_examples():
    assert sigma(path_graph(3), 4) == 0
    assert sigma(star(5), 4) == 1
    assert sigma(star(5), 3) == 0
    with pytest.raises(ValueError):
        sigma(star(5), 5)


def test_potential_examples():
    assert potential_of_subset(cycle_graph(5), 3, []) == 0
    assert potential_of_subset(path_graph(3), 3, range(3)) == -3
    assert potential_of_subset(star(5), 3, range(6)) == 3


@given(graph_and_subset(1, 10), st.sampled_from([3, 4]))
def test_potential_matches_oracle(data, k):
    G, A = data
    assert potential_of_subset(G, k, A) == rho_oracle(G, k, A)


@given(graph_and_subset(2, 10), st.sampled_from([3, 4]), st.data())
def test_edge_modularity(data, k, d):
    """An edge added inside A (not changing V1 membership in A) adds exactly eps."""
    G, A = data
    non = [(u, v) for u in members(A) for v in members(A) if u < v and not G.has_edge(u, v)]
    if not non:
        return
    u, v = d.draw(st.sampled_from(non))
    H = G.add_edges([(u, v)])
    leaf_shift = sum((H.degree(x) == 1) - (G.degree(x) == 1) for x in members(A))
    diff = potential_of_subset(H, k, A) - potential_of_subset(G, k, A)
    assert diff == params(k).epsilon + params(k).half_eps * leaf_shift


# -- maximisation ------------------------------------------------------------

@pytest.mark.parametrize("G, k, value", [
    (cycle_graph(6), 3, 0),
    (star(5), 3, 3),
    (star(8), 4, 3),
    (complete_bipartite(2, 3), 3, 1),
])
def test_max_potential_examples(G, k, value):
    for method in ("flow", "brute"):
        res = max_potential(G, k, method)
        assert res.value == value
    if value == 0:
        assert max_potential(G, k).extreme_union == frozenset()


def test_brute_cap():
    with pytest.raises(ValueError):
        max_potential(path_graph(30), 3, "brute")


@given(graphs(0, 10), st.sampled_from([3, 4]))
def test_flow_against_subset_oracle(G, k):
    best, maxers = all_maximisers(G, k)
    res = max_potential(G, k, "flow")
    assert res.value == best
    union = 0
    inter = maxers[0]
    for A in maxers:
        union |= A
        inter &= A
    assert res.extreme_union == frozenset(members(union))
    assert res.witness == frozenset(members(inter))
    assert res.witness <= res.extreme_union
    assert potential_of_subset(G, k, res.witness) == best
    assert potential_of_subset(G, k, res.extreme_union) == best


@given(graphs(0, 14), st.sampled_from([3, 4]))
def test_flow_equals_brute(G, k):
    a, b = max_potential(G, k, "flow"), max_potential(G, k, "brute")
    assert (a.value, a.witness, a.extreme_union) == (b.value, b.witness, b.extreme_union)


@given(graphs(1, 9), st.sampled_from([3, 4]))
def test_union_of_maximisers_is_maximiser(G, k):
    best, maxers = all_maximisers(G, k)
    for A in maxers[:6]:
        for B in maxers[:6]:
            assert rho_oracle(G, k, A | B) == best


# -- supermodularity ---------------------------------------------------------

def test_supermodularity_trivial_cases():
    G = complete_graph(5)
    assert check_supermodularity(G, 3, {0, 1}, {0, 1})
    assert check_supermodularity(G, 4, set(), {2, 3})


@given(graph_and_subset(1, 12), st.data(), st.sampled_from([3, 4]))
def test_supermodularity(data, d, k):
    G, A = data
    B = d.draw(st.integers(0, G.full_mask))
    assert check_supermodularity(G, k, A, B)
    lhs = rho_oracle(G, k, A) + rho_oracle(G, k, B)
    assert lhs <= rho_oracle(G, k, A | B) + rho_oracle(G, k, A & B)


# -- sparseness and mad ------------------------------------------------------

def test_sparseness_examples():
    for n in range(3, 9):
        assert check_sparseness(cycle_graph(n), 7, 6, Fraction(1, 3)).ok
    res = check_sparseness(complete_graph(4), 7, 6, Fraction(1, 3))
    assert not res.ok and res.witness == frozenset(range(4))
    assert check_sparseness(complete_bipartite(2, 3), 5, 4, Fraction(1, 2)).ok


@given(graphs(1, 9), st.integers(0, 8), st.integers(1, 4), st.fractions(-3, 3, max_denominator=6))
def test_sparseness_against_brute(G, num, den, add):
    worst = None
    for A in range(1, 1 << G.n):
        ex = Fraction(den * G.edges_in(A) - num * popcount(A)) - den * add
        if worst is None or ex > worst:
            worst = ex
    res = check_sparseness(G, num, den, add)
    assert res.ok == (worst <= 0)
    if not res.ok:
        W = res.witness
        assert W and den * G.edges_in(W) > num * len(W) + den * add


def test_mad_examples():
    assert max_average_degree(cycle_graph(6)) == 2
    assert max_average_degree(complete_graph(4)) == 3
    assert max_average_degree(complete_bipartite(2, 3)) == Fraction(12, 5)
    with pytest.raises(ValueError):
        max_average_degree(Graph(0, []))


@given(graphs(1, 9))
def test_mad_against_brute(G):
    best = max(Fraction(2 * G.edges_in(A), popcount(A)) for A in range(1, 1 << G.n))
    assert max_average_degree(G) == best
