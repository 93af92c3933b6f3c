"""Simple undirected graphs on dense vertex ids with bitmask adjacency.

Vertex sets are passed around either as iterables of ints or as Python int
bitmasks; every public function accepts an iterable and returns a
``frozenset`` so results are hashable and order-free.
"""
from __future__ import annotations

import json
from collections import deque
from typing import Iterable, Iterator, Sequence


class GraphError(ValueError):
    """Base class for malformed graph input; ``code`` is a stable short tag."""

    code = "graph"


class ParseError(GraphError):
    code = "parse"


class SelfLoopError(GraphError):
    code = "self-loop"


class DuplicateEdgeError(GraphError):
    code = "duplicate-edge"


class VertexRangeError(GraphError):
    code = "vertex-range"


def mask_of(vertices: Iterable[int] | int) -> int:
    if isinstance(vertices, int):
        return vertices
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``adj[v]`` is the neighbourhood of ``v`` as a bitmask.  ``labels`` is an
    optional tuple of original names (used by induced subgraphs to remember
    parent ids).
    """

    __slots__ = ("n", "adj", "labels", "_nbrs", "_edges")

    def __init__(self, n: int, adj: Sequence[int], labels: Sequence | None = None):
        self.n = n
        self.adj = tuple(adj)
        self.labels = tuple(labels) if labels is not None else None
        self._nbrs = tuple(tuple(members(a)) for a in self.adj)
        self._edges = None

    # -- construction -----------------------------------------------------
    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "Graph":
        if n < 0:
            raise VertexRangeError(f"negative vertex count {n}")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise SelfLoopError(f"self-loop at {u}")
            if adj[u] >> v & 1:
                raise DuplicateEdgeError(f"duplicate edge ({u},{v})")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj, labels)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    # -- basic quantities ---------------------------------------------------
    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def m(self) -> int:
        return sum(popcount(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        if self._edges is None:
            self._edges = tuple((u, v) for u in range(self.n) for v in self._nbrs[u] if u < v)
        return list(self._edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._nbrs[v]

    def degree(self, v: int) -> int:
        return len(self._nbrs[v])

    def degrees(self) -> list[int]:
        return [len(nb) for nb in self._nbrs]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def leaves_mask(self) -> int:
        return mask_of(v for v in range(self.n) if len(self._nbrs[v]) == 1)

    def leaves(self) -> frozenset[int]:
        return degree_class(self, 1)

    # -- counting ------------------------------------------------------------
    def edges_in(self, A: Iterable[int] | int) -> int:
        """``‖G[A]‖``."""
        a = mask_of(A)
        return sum(popcount(self.adj[v] & a) for v in members(a)) // 2

    def edges_between(self, X: Iterable[int] | int, Y: Iterable[int] | int) -> int:
        """``‖X,Y‖``: edges with one end in X and the other in Y (X, Y disjoint)."""
        x, y = mask_of(X), mask_of(Y)
        return sum(popcount(self.adj[v] & y) for v in members(x))

    def degree_into(self, v: int, A: Iterable[int] | int) -> int:
        return popcount(self.adj[v] & mask_of(A))

    def neighborhood(self, A: Iterable[int] | int) -> int:
        """Open neighbourhood ``N(A) - A`` as a mask."""
        a = mask_of(A)
        out = 0
        for v in members(a):
            out |= self.adj[v]
        return out & ~a

    # -- subgraphs --------------------------------------------------------------
    def induced(self, A: Iterable[int] | int) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph on A, relabelled to ``0..|A|-1`` in increasing id order.

        Returns ``(H, parent)`` where ``parent[i]`` is the parent id of vertex i.
        """
        a = mask_of(A)
        if a >> self.n:
            raise VertexRangeError("vertex set contains ids outside the graph")
        parent = tuple(members(a))
        index = {v: i for i, v in enumerate(parent)}
        adj = []
        for v in parent:
            m = 0
            for w in members(self.adj[v] & a):
                m |= 1 << index[w]
            adj.append(m)
        return Graph(len(parent), adj, parent), parent

    def delete(self, A: Iterable[int] | int) -> tuple["Graph", tuple[int, ...]]:
        """``G - A`` with the same relabelling convention as :meth:`induced`."""
        return self.induced(self.full_mask & ~mask_of(A))

    def add_edges(self, edges: Iterable[tuple[int, int]], extra_vertices: int = 0) -> "Graph":
        return Graph.from_edges(self.n + extra_vertices, self.edges() + list(edges))

    # -- connectivity -------------------------------------------------------
    def component_of(self, v: int, within: int | None = None) -> int:
        allowed = self.full_mask if within is None else within
        seen = 1 << v
        frontier = 1 << v
        while frontier:
            nxt = 0
            for u in members(frontier):
                nxt |= self.adj[u]
            nxt &= allowed & ~seen
            seen |= nxt
            frontier = nxt
        return seen

    def components(self, within: int | None = None) -> list[int]:
        left = self.full_mask if within is None else within
        comps = []
        while left:
            v = (left & -left).bit_length() - 1
            c = self.component_of(v, left)
            comps.append(c)
            left &= ~c
        return comps

    def is_connected(self) -> bool:
        return self.n == 0 or self.component_of(0) == self.full_mask

    def shortest_path(self, src: int, targets: int, within: int | None = None) -> list[int] | None:
        """BFS path from ``src`` to the nearest vertex of mask ``targets``."""
        allowed = self.full_mask if within is None else within
        prev = {src: None}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            if targets >> u & 1:
                path = [u]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return path[::-1]
            for w in self._nbrs[u]:
                if allowed >> w & 1 and w not in prev:
                    prev[w] = u
                    queue.append(w)
        return None

    # -- serialisation ----------------------------------------------------
    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges()]}

    def to_edge_list(self) -> str:
        lines = [f"{self.n} {self.m}"] + [f"{u} {v}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# module-level helpers


def load_graph(text: str) -> Graph:
    """Parse the edge-list format: header ``n m`` then m lines ``u v``.

    Blank lines and ``#`` comments are ignored.  A document that starts with
    ``{`` is read as the JSON form ``{"n": ..., "edges": [[u, v], ...]}``.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return graph_from_json(stripped)
    tokens: list[list[str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            tokens.append(line.split())
    if not tokens:
        raise ParseError("empty document")
    head = tokens[0]
    if len(head) != 2:
        raise ParseError(f"header must be 'n m', got {' '.join(head)!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ParseError(f"non-integer header {' '.join(head)!r}") from exc
    if n < 0 or m < 0:
        raise ParseError("negative header values")
    body = tokens[1:]
    if len(body) != m:
        raise ParseError(f"header announces {m} edges, found {len(body)}")
    edges = []
    for row in body:
        if len(row) != 2:
            raise ParseError(f"edge line must have two ids, got {' '.join(row)!r}")
        try:
            edges.append((int(row[0]), int(row[1])))
        except ValueError as exc:
            raise ParseError(f"non-integer edge {' '.join(row)!r}") from exc
    return Graph.from_edges(n, edges)


def graph_from_json(doc: str | dict) -> Graph:
    obj = json.loads(doc) if isinstance(doc, str) else doc
    try:
        n = int(obj["n"])
        edges = [(int(u), int(v)) for u, v in obj["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad graph JSON: {exc}") from exc
    return Graph.from_edges(n, edges)


def degree_class(G: Graph, i: int, variant: str = "eq") -> frozenset[int]:
    """``V_i`` (``variant='eq'``), ``V_{i+}`` (``'plus'``) or ``V_{i-}`` (``'minus'``)."""
    degs = G.degrees()
    if variant == "eq":
        return frozenset(v for v in range(G.n) if degs[v] == i)
    if variant == "plus":
        return frozenset(v for v in range(G.n) if degs[v] >= i)
    if variant == "minus":
        return frozenset(v for v in range(G.n) if degs[v] <= i)
    raise ValueError(f"unknown variant {variant!r}")


def induced_subgraph(G: Graph, A: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    return G.induced(A)


def is_hidden(G: Graph, H: Iterable[int], v: int) -> bool:
    h = mask_of(H)
    if not h >> v & 1:
        raise ValueError(f"vertex {v} is not in H")
    return G.adj[v] & ~h == 0


def is_handy(G: Graph, B: Iterable[int]) -> bool:
    """True iff deleting B creates no new degree-1 vertices."""
    b = mask_of(B)
    rest = G.full_mask & ~b
    for v in members(rest):
        if popcount(G.adj[v] & rest) == 1 and G.degree(v) != 1:
            return False
    return True


def iter_masks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` (including 0 and mask)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


# ---------------------------------------------------------------------------
# named constructors


def empty_graph(n: int) -> Graph:
    return Graph(n, [0] * n)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def star(leaves: int) -> Graph:
    """``K_{1,leaves}`` with centre 0."""
    return complete_bipartite(1, leaves)


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    off = 0
    for H in graphs:
        edges.extend((u + off, v + off) for u, v in H.edges())
        off += H.n
    return Graph.from_edges(off, edges)
