"""Threads, maximal bugs and their tags, and the core/buffer decomposition.

Terminology (all degrees are taken in G):

* a *thread* is a path from a root ``r`` of degree >= 3 through degree-2
  vertices to an end ``a``; plain if ``d(a) >= 3``, loose if ``d(a) = 1``,
  closed if ``a = r``.  ``t`` counts its vertices of degree <= 2.
* the maximal bug ``B(r)`` is the component of ``r`` in
  ``G - (V_{3+} - r)``; its walks out of ``r`` split ``B - r`` into leg
  vertices (on plain walks) and body vertices (loose or closed walks).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, NamedTuple

from .graph import Graph, mask_of, members, popcount


@dataclass(frozen=True)
class Thread:
    root: int
    end: int
    path: tuple[int, ...]
    t: int
    kind: str  # plain | loose | closed

    @property
    def interior(self) -> tuple[int, ...]:
        return self.path[1:] if self.kind == "loose" else self.path[1:-1]


def _walk(G: Graph, r: int, first: int) -> list[int]:
    """Follow degree-2 vertices from r through ``first`` until leaving them."""
    path = [r, first]
    prev, cur = r, first
    while cur != r and G.degree(cur) == 2:
        a, b = G.neighbors(cur)
        nxt = b if a == prev else a
        path.append(nxt)
        prev, cur = cur, nxt
    return path


def _classify_walk(G: Graph, path: list[int]) -> str:
    end = path[-1]
    if end == path[0] and len(path) > 2:
        return "closed"
    if G.degree(end) == 1:
        return "loose"
    return "plain"


def find_threads(G: Graph) -> list[Thread]:
    """Every maximal thread once.

    Plain threads are oriented from their lower-id end; closed threads so
    that the second vertex is smaller than the penultimate one.  Edges
    between two vertices of degree >= 3 appear as plain 0-threads.
    """
    out: list[Thread] = []
    seen: set[tuple[int, ...]] = set()
    for r in range(G.n):
        if G.degree(r) < 3:
            continue
        for u in G.neighbors(r):
            path = _walk(G, r, u)
            kind = _classify_walk(G, path)
            if kind == "plain":
                if path[-1] < path[0]:
                    path = path[::-1]
            elif kind == "closed":
                if path[1] > path[-2]:
                    path = path[::-1]
            key = tuple(path)
            if key in seen:
                continue
            seen.add(key)
            t = len(path) - 1 if kind == "loose" else len(path) - 2
            out.append(Thread(path[0], path[-1], key, t, kind))
    return out


class BugTag(NamedTuple):
    name: str            # none | fork | wishbone | jellyfish
    degree: int | None = None   # d(r) for forks

    def __str__(self) -> str:
        return f"fork({self.degree})" if self.name == "fork" else self.name


@dataclass(frozen=True)
class Bug:
    root: int
    vertices: frozenset
    legs: frozenset
    body: frozenset
    lam: int
    pi: int
    walks: tuple = field(default=(), compare=False)
    tag: BugTag | None = None

    @property
    def size(self) -> int:
        return len(self.vertices)

    def to_json(self) -> dict:
        return {"root": self.root, "vertices": sorted(self.vertices), "size": self.size,
                "lambda": self.lam, "pi": self.pi, "legs": sorted(self.legs),
                "body": sorted(self.body), "tag": None if self.tag is None else str(self.tag)}


def bug_mask(G: Graph, r: int) -> int:
    high = mask_of(v for v in range(G.n) if G.degree(v) >= 3 and v != r)
    return G.component_of(r, G.full_mask & ~high)


def maximal_bug(G: Graph, r: int) -> Bug:
    """``B(r)`` with its root walks, legs, body, lambda and pi."""
    if not 0 <= r < G.n:
        raise ValueError(f"vertex {r} not in graph")
    B = bug_mask(G, r)
    walks = []
    seen_closed: set[frozenset] = set()
    legs = body = 0
    lam = 0
    for u in G.neighbors(r):
        if not B >> u & 1 and G.degree(u) >= 3:
            # plain 0-walk to another high vertex
            walks.append(Thread(r, u, (r, u), 0, "plain"))
            continue
        path = _walk(G, r, u)
        kind = _classify_walk(G, path)
        if kind == "closed":
            key = frozenset(path[1:-1])
            if key in seen_closed:
                continue
            seen_closed.add(key)
            inner = path[1:-1]
            t = len(inner)
        elif kind == "loose":
            inner = path[1:]
            t = len(inner)
        else:
            inner = path[1:-1]
            t = len(inner)
        walks.append(Thread(r, path[-1], tuple(path), t, kind))
        if kind == "plain":
            legs |= mask_of(inner)
            if t == 2:
                lam += 1
        else:
            body |= mask_of(inner)
    legs &= ~(1 << r)
    body &= ~(1 << r)
    return Bug(r, frozenset(members(B)), frozenset(members(legs)), frozenset(members(body)),
               lam, popcount(body), tuple(walks))


class ContractError(ValueError):
    pass


def classify_bug(G: Graph, B: Bug, k: int) -> BugTag:
    if mask_of(B.vertices) != bug_mask(G, B.root):
        raise ContractError("classify_bug needs the maximal bug B(r)")
    d = G.degree(B.root)
    size = len(B.vertices)
    if d in (k - 1, k) and size == d + 2 and B.lam == 1 and B.pi == 0:
        return BugTag("fork", d)
    if d == k and G.degree_into(B.root, mask_of(B.vertices)) == d and size == k + 1 and B.lam == 0:
        if B.pi == 2:
            return BugTag("wishbone")
        if B.pi == 1:
            return BugTag("jellyfish")
    return BugTag("none")


def tagged_bug(G: Graph, r: int, k: int) -> Bug:
    B = maximal_bug(G, r)
    return replace(B, tag=classify_bug(G, B, k))


def fork_roots(G: Graph, k: int) -> frozenset:
    """Roots r of forks (only d(r) in {k-1, k} can qualify)."""
    out = []
    for r in range(G.n):
        if G.degree(r) in (k - 1, k) and classify_bug(G, maximal_bug(G, r), k).name == "fork":
            out.append(r)
    return frozenset(out)


def inventory(G: Graph, k: int) -> dict:
    threads = find_threads(G)
    bugs = [tagged_bug(G, r, k) for r in range(G.n) if G.degree(r) >= 3]
    return {
        "threads": [{"root": t.root, "end": t.end, "kind": t.kind, "t": t.t, "path": list(t.path)}
                    for t in threads],
        "bugs": [b.to_json() for b in bugs],
        "fork_roots": sorted(fork_roots(G, k)),
    }


# ---------------------------------------------------------------------------
# core and buffer


@dataclass(frozen=True)
class CoreBuffer:
    core: frozenset                 # H
    buffer_vertices: frozenset      # V(F)
    buffer_edges: tuple             # E(F)
    leaf: int | None                # the preferred G-leaf l (if G has leaves)

    def to_json(self) -> dict:
        return {"core": sorted(self.core), "buffer_vertices": sorted(self.buffer_vertices),
                "buffer_edges": [list(e) for e in self.buffer_edges], "leaf": self.leaf}


def two_core(G: Graph, within: int) -> int:
    """Largest subset of ``within`` inducing minimum degree >= 2 (iterated peeling)."""
    alive = within
    changed = True
    while changed:
        changed = False
        for v in members(alive):
            if popcount(G.adj[v] & alive) <= 1:
                alive &= ~(1 << v)
                changed = True
    return alive


def core_buffer(G: Graph, B: Iterable[int] | Bug) -> CoreBuffer:
    """Core H and buffer forest F of ``G0 = G - B``.

    Tree components of G0 contribute a single vertex (the G-leaf if it lies
    there, else the smallest id); other components contribute their 2-core,
    extended by a shortest path to the G-leaf when that leaf lies outside it.
    If G has several leaves the smallest-id one plays the role of l.
    """
    bmask = mask_of(B.vertices if isinstance(B, Bug) else B)
    g0 = G.full_mask & ~bmask
    if g0 == 0:
        raise ValueError("G - B is empty")
    leaves = G.leaves_mask()
    leaf = (leaves & -leaves).bit_length() - 1 if leaves else None
    H = 0
    for Z in G.components(g0):
        zedges = G.edges_in(Z)
        if zedges == popcount(Z) - 1:  # tree
            if leaf is not None and Z >> leaf & 1:
                H |= 1 << leaf
            else:
                H |= Z & -Z
            continue
        core = two_core(G, Z)
        if leaf is not None and Z >> leaf & 1 and not core >> leaf & 1:
            path = G.shortest_path(leaf, core, within=Z)
            core |= mask_of(path)
        H |= core
    rest = g0 & ~H
    attach = G.neighborhood(rest) & H
    fverts = rest | attach
    fedges = tuple((u, v) for u, v in G.edges()
                   if (rest >> u & 1 and fverts >> v & 1) or (rest >> v & 1 and fverts >> u & 1))
    return CoreBuffer(frozenset(members(H)), frozenset(members(fverts)), fedges, leaf)


# ---------------------------------------------------------------------------
# good strings


@dataclass(frozen=True)
class GoodString:
    Q: frozenset
    coloring: dict
    core: CoreBuffer
    steps: tuple            # (kind, vertices) per peeled piece, in extension order


def good_string(G: Graph, B: Bug | Iterable[int], L, k: int) -> GoodString | None:
    """Colour ``G - B - Q`` SE from L for an independent set Q of buffer leaves.

    Follows the induction on the buffer: SE-colour the core exactly, strip
    pendant pieces ``B' = B_F(l) - H`` at buffer leaves l, then put them back
    in reverse order.  A single-vertex piece whose anchor is coloured is
    deferred into Q; longer pieces extend by the degree-1-root safety rule.
    A single-vertex piece whose anchor was itself deferred is isolated at
    that point and is coloured directly (a one-vertex set with no coloured
    neighbours is always safe).
    """
    from .coloring import normalize_lists, solve
    from .safety import apply_witness, bug_safety

    bmask = mask_of(B.vertices if isinstance(B, Bug) else B)
    lists = normalize_lists(G, k, L)
    g0 = G.full_mask & ~bmask
    if g0 == 0:
        cb = CoreBuffer(frozenset(), frozenset(), (), None)
        return GoodString(frozenset(), {}, cb, ())
    cb = core_buffer(G, bmask)
    H = mask_of(cb.core)
    Hg, parent = G.induced(H)
    f_core = solve(Hg, k, [lists[v] for v in parent], "SE")
    if f_core is None:
        return None
    f = {parent[i]: c for i, c in f_core.items()}

    # peel: F-components meet H once, so a non-H F-leaf exists while F - H is nonempty
    fmask = mask_of(cb.buffer_vertices)
    fadj = {v: 0 for v in members(fmask)}
    for u, v in cb.buffer_edges:
        fadj[u] |= 1 << v
        fadj[v] |= 1 << u
    alive = fmask
    pieces: list[list[int]] = []
    while alive & ~H:
        l = next(v for v in members(alive & ~H) if popcount(fadj[v] & alive) <= 1)
        piece = [l]
        prev, cur = -1, l
        while True:
            nbrs = [w for w in members(fadj[cur] & alive) if w != prev and w not in piece]
            if len(nbrs) != 1:
                break
            nxt = nbrs[0]
            if H >> nxt & 1 or popcount(fadj[nxt] & alive) >= 3:
                break
            piece.append(nxt)
            prev, cur = cur, nxt
        pieces.append(piece)
        alive &= ~mask_of(piece)

    coloured = H
    Q = 0
    steps = []
    for piece in reversed(pieces):
        pmask = mask_of(piece)
        if len(piece) == 1:
            l = piece[0]
            anchor = G.adj[l] & g0 & coloured
            if anchor:
                Q |= 1 << l
                steps.append(("defer", (l,)))
                continue
        active = coloured | pmask
        Ga, amap = G.induced(active)
        inv = {v: i for i, v in enumerate(amap)}
        sub_bug = maximal_bug(Ga, inv[piece[0]])
        # the piece is a path hanging at a degree <= 1 root; use exactly its vertices
        sub_bug = Bug(inv[piece[0]], frozenset(inv[v] for v in piece), frozenset(),
                      frozenset(inv[v] for v in piece[1:]), 0, len(piece) - 1, sub_bug.walks)
        verdict = bug_safety(Ga, sub_bug, k)
        if verdict.status != "safe":  # pragma: no cover - excluded by the degree-1 rule
            raise AssertionError(f"pendant piece {piece} not certified safe")
        sub_lists = [lists[v] for v in amap]
        f_sub = {inv[v]: c for v, c in f.items()}
        f_sub = apply_witness(Ga, verdict, k, sub_lists, f_sub)
        f = {amap[i]: c for i, c in f_sub.items()}
        coloured = active
        steps.append(("extend:" + verdict.rule, tuple(piece)))
    return GoodString(frozenset(members(Q)), f, cb, tuple(steps))
