"""Connected graphs up to isomorphism, by vertex augmentation plus canonical forms.

Every connected graph on n vertices has a non-cut vertex, so it arises from a
connected graph on n-1 vertices by adding a vertex joined to a non-empty
subset.  Children are deduplicated with a canonical certificate computed by
individualisation-refinement (colour refinement to an equitable partition,
then branching on the first smallest non-singleton cell).  Twins
(vertices with equal open or closed neighbourhoods) are interchangeable, so
only one per twin class is branched on.
"""
from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterator

from .graph import Graph, members, popcount

KNOWN_CONNECTED_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117}


def _refine(adj: tuple[int, ...], cells: list[list[int]]) -> list[list[int]]:
    while True:
        masks = [sum(1 << v for v in cell) for cell in cells]
        out: list[list[int]] = []
        split = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            sig = {v: tuple(popcount(adj[v] & cm) for cm in masks) for v in cell}
            keys = sorted(set(sig.values()))
            if len(keys) > 1:
                split = True
                for key in keys:
                    out.append([v for v in cell if sig[v] == key])
            else:
                out.append(cell)
        cells = out
        if not split:
            return cells


def _certificate(adj: tuple[int, ...], order: list[int]) -> tuple[int, ...]:
    pos = {v: i for i, v in enumerate(order)}
    cert = []
    for v in order:
        m = 0
        for w in members(adj[v]):
            m |= 1 << pos[w]
        cert.append(m)
    return tuple(cert)


def _twin_classes(adj: tuple[int, ...], n: int) -> list[int]:
    rep = list(range(n))
    for u in range(n):
        if rep[u] != u:
            continue
        for v in range(u + 1, n):
            if rep[v] == v and (adj[u] & ~(1 << v)) == (adj[v] & ~(1 << u)):
                rep[v] = u
    return rep


def canonical_form(G: Graph) -> tuple[int, tuple[int, ...]]:
    """Certificate equal for two graphs iff they are isomorphic."""
    n, adj = G.n, G.adj
    if n == 0:
        return (0, ())
    twin = _twin_classes(adj, n)
    degs = [popcount(a) for a in adj]
    init = [[v for v in range(n) if degs[v] == d] for d in sorted(set(degs))]
    best: list = [None]

    def search(cells):
        cells = _refine(adj, cells)
        target = None
        for i, cell in enumerate(cells):
            if len(cell) > 1 and (target is None or len(cell) < len(cells[target])):
                target = i
        if target is None:
            cert = _certificate(adj, [c[0] for c in cells])
            if best[0] is None or cert > best[0]:
                best[0] = cert
            return
        cell = cells[target]
        tried = set()
        for v in cell:
            if twin[v] in tried:
                continue
            tried.add(twin[v])
            rest = [w for w in cell if w != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    search(init)
    return (n, best[0])


def graph_from_certificate(cert: tuple[int, tuple[int, ...]]) -> Graph:
    n, rows = cert
    return Graph(n, rows)


@lru_cache(maxsize=None)
def _connected_certs(n: int) -> tuple:
    if n <= 0:
        return ()
    if n == 1:
        return (canonical_form(Graph(1, [0])),)
    seen = set()
    for cert in _connected_certs(n - 1):
        parent = graph_from_certificate(cert)
        base = list(parent.adj)
        for S in range(1, 1 << (n - 1)):
            adj = [base[v] | ((S >> v & 1) << (n - 1)) for v in range(n - 1)] + [S]
            seen.add(canonical_form(Graph(n, adj)))
    return tuple(sorted(seen))


def connected_graphs(n: int) -> Iterator[Graph]:
    """All connected graphs on n vertices, one per isomorphism class, in a fixed order."""
    for cert in _connected_certs(n):
        yield graph_from_certificate(cert)


def count_connected(n: int) -> int:
    return len(_connected_certs(n))


def random_connected_graph(n: int, rng: random.Random, p: float | None = None) -> Graph:
    """Random spanning tree plus independent extra edges with probability p."""
    if p is None:
        p = rng.uniform(0.0, 0.5)
    edges = set()
    perm = list(range(n))
    rng.shuffle(perm)
    for i in range(1, n):
        u, v = perm[i], perm[rng.randrange(i)]
        edges.add((min(u, v), max(u, v)))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < p:
                edges.add((u, v))
    return Graph.from_edges(n, sorted(edges))


def random_graph(n: int, rng: random.Random, p: float | None = None) -> Graph:
    if p is None:
        p = rng.uniform(0.05, 0.6)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)
