"""Safe sets: the ordering lemma, greedy extension and the bug-safety rules.

A set S is *safe* in G when every SE L-colouring of G - S extends to an SE
L-colouring of G.  Verdicts carry an explicit, replayable witness: a list
of stages ``S_1, ..., S_p`` (a partition of the target set).  Stage i is
extended inside ``G - (S_{i+1} ∪ ... ∪ S_p)``, so the last stage is
extended in G itself.  Two stage kinds exist:

``P+``       an ordering ``v_1..v_s`` (s <= k) with ``||v_i, G_i - S_i|| < i``,
             extended by the greedy of the ordering lemma;
``counting`` one or two vertices whose extension is guaranteed by a
             counting argument on class sizes; extended by trying the
             (at most k^2) colour combinations.

All work happens on an "active" vertex mask of a parent graph, so vertex
ids never change between stages.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .coloring import _se_sizes_ok, is_SE, iter_colorings, normalize_lists
from .graph import Graph, mask_of, members, popcount
from .potential import mod_star
from .structure import Bug, bug_mask


class ExtensionError(RuntimeError):
    """A certified extension failed - indicates a bug in this package."""


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class Stage:
    order: tuple[int, ...]
    method: str          # "P+" | "counting"
    rule: str

    def to_json(self) -> dict:
        return {"order": list(self.order), "method": self.method, "rule": self.rule}


@dataclass(frozen=True)
class SafetyVerdict:
    status: str                  # "safe" | "unknown"
    rule: str | None
    target: frozenset
    stages: tuple[Stage, ...] = ()
    reason: str = field(default="", compare=False)

    def to_json(self) -> dict:
        return {"status": self.status, "rule": self.rule, "target": sorted(self.target),
                "stages": [s.to_json() for s in self.stages], "reason": self.reason}

    def relabel(self, mapping) -> "SafetyVerdict":
        """Translate vertex ids (e.g. from an induced subgraph to its parent)."""
        stages = tuple(Stage(tuple(mapping[v] for v in s.order), s.method, s.rule)
                       for s in self.stages)
        return SafetyVerdict(self.status, self.rule, frozenset(mapping[v] for v in self.target),
                             stages, self.reason)


def _deg(G: Graph, v: int, active: int) -> int:
    return popcount(G.adj[v] & active)


def _ordering_ok(G: Graph, order, active: int) -> bool:
    outside = active & ~mask_of(order)
    return all(popcount(G.adj[v] & outside) < i + 1 for i, v in enumerate(order))


def pelsmajer_ordering(G: Graph, S: Iterable[int], k: int, active: int | None = None):
    """An ordering of S with ``||v_i, G - S|| < i``, or None.

    Sorting by out-degree is optimal: such an ordering exists iff the sorted
    out-degrees satisfy ``d_(i) <= i - 1``.
    """
    act = G.full_mask if active is None else active
    smask = mask_of(S)
    if popcount(smask) > k:
        raise PreconditionError(f"|S| = {popcount(smask)} exceeds k = {k}")
    if smask & ~act:
        raise PreconditionError("S is not inside the graph")
    outside = act & ~smask
    order = sorted(members(smask), key=lambda v: (popcount(G.adj[v] & outside), v))
    for i, v in enumerate(order):
        if popcount(G.adj[v] & outside) > i:
            return None
    return tuple(order)


# ---------------------------------------------------------------------------
# extension primitives (operate in G[active]; f is modified in place)


def _class_state(f: dict, base: int):
    return Counter(f[v] for v in members(base))


def _extend_p_plus(G: Graph, active: int, order, k: int, lists, f: dict) -> None:
    smask = mask_of(order)
    base = active & ~smask
    n0 = popcount(base)
    sizes = _class_state(f, base)
    if n0:
        cap0 = -(-n0 // k)
        T = sorted(c for c, s in sizes.items() if s == cap0)
    else:
        T = []
    used = set(T[: k - len(order)])
    for v in reversed(order):
        forbidden = used | {f[w] for w in members(G.adj[v] & base)}
        choices = sorted(set(lists[v]) - forbidden)
        if not choices:
            raise ExtensionError(f"greedy ran out of colours at vertex {v}")
        f[v] = choices[0]
        used.add(choices[0])


def _extend_counting(G: Graph, active: int, order, k: int, lists, f: dict) -> None:
    smask = mask_of(order)
    base = active & ~smask
    n = popcount(active)
    sizes = _class_state(f, base)
    for combo in itertools.product(*[sorted(lists[v]) for v in order]):
        trial = dict(zip(order, combo))
        ok = True
        for v, c in trial.items():
            if any((f.get(w) if base >> w & 1 else trial.get(w)) == c
                   for w in members(G.adj[v] & active)):
                ok = False
                break
        if not ok:
            continue
        new = sizes.copy()
        new.update(trial.values())
        if _se_sizes_ok(new, n, k):
            f.update(trial)
            return
    raise ExtensionError(f"no SE extension to {tuple(order)} exists")


def _se_on(G: Graph, active: int, k: int, lists, f: dict) -> bool:
    for v in members(active):
        if v not in f or f[v] not in lists[v]:
            return False
        if any(f.get(w) == f[v] for w in members(G.adj[v] & active)):
            return False
    return _se_sizes_ok(_class_state(f, active), popcount(active), k)


def extend_se(G: Graph, S: Iterable[int], k: int, L, f0: dict, ordering) -> dict:
    """Extend an SE colouring f0 of G - S over S along a valid ordering."""
    smask = mask_of(S)
    lists = normalize_lists(G, k, L)
    if popcount(smask) > k:
        raise PreconditionError("|S| must be at most k")
    if mask_of(ordering) != smask or len(ordering) != popcount(smask):
        raise PreconditionError("ordering must list each vertex of S once")
    if set(f0) != set(members(G.full_mask & ~smask)):
        raise PreconditionError("f0 must colour exactly G - S")
    if not _ordering_ok(G, ordering, G.full_mask):
        raise PreconditionError("ordering violates ||v_i, G - S|| < i")
    if not _se_on(G, G.full_mask & ~smask, k, lists, f0):
        raise PreconditionError("f0 is not an SE L-colouring of G - S")
    f = dict(f0)
    _extend_p_plus(G, G.full_mask, tuple(ordering), k, lists, f)
    if not _se_on(G, G.full_mask, k, lists, f):
        raise ExtensionError("extension is not SE")
    return f


def apply_witness(G: Graph, verdict: SafetyVerdict, k: int, L, f0: dict,
                  active: int | None = None) -> dict:
    """Replay a safe verdict: extend f0 (an SE colouring of G - target) to G."""
    if verdict.status != "safe":
        raise PreconditionError("only safe verdicts carry a witness")
    lists = normalize_lists(G, k, L)
    act = G.full_mask if active is None else active
    target = mask_of(verdict.target)
    f = dict(f0)
    pending = target
    for st in verdict.stages:
        pending &= ~mask_of(st.order)
        graph_mask = act & ~pending
        if st.method == "P+":
            _extend_p_plus(G, graph_mask, st.order, k, lists, f)
        else:
            _extend_counting(G, graph_mask, st.order, k, lists, f)
        if not _se_on(G, graph_mask, k, lists, f):
            raise ExtensionError(f"stage {st} did not produce an SE colouring")
    return f


def check_witness(G: Graph, verdict: SafetyVerdict, k: int, active: int | None = None) -> bool:
    """Independently re-check the stage structure against the lemma hypotheses."""
    if verdict.status != "safe":
        return False
    act = G.full_mask if active is None else active
    target = mask_of(verdict.target)
    seen = 0
    for st in verdict.stages:
        m = mask_of(st.order)
        if m & seen or len(st.order) != popcount(m):
            return False
        seen |= m
    if seen != target or target & ~act:
        return False
    pending = target
    for st in verdict.stages:
        pending &= ~mask_of(st.order)
        gm = act & ~pending
        n = popcount(gm)
        if st.method == "P+":
            if len(st.order) > k or not _ordering_ok(G, st.order, gm):
                return False
        elif st.method == "counting":
            base = gm & ~mask_of(st.order)
            if len(st.order) == 1:
                v = st.order[0]
                d = popcount(G.adj[v] & gm)
                if d <= 1 and n % k != 0:
                    continue
                if d == 2 and n % k not in (0, k - 1):
                    continue
                return False
            if len(st.order) == 2:
                u, v = st.order
                if not G.adj[u] >> v & 1 or n % k in (0, 1):
                    return False
                if popcount(G.adj[u] & base) > 1 or popcount(G.adj[v] & base) > 1:
                    return False
                continue
            return False
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# bug rules


def _hidden(G: Graph, v: int, B: int, active: int) -> bool:
    return G.adj[v] & active & ~B == 0


def _path_order(G: Graph, start: int, B: int) -> list[int]:
    order = [start]
    prev, cur = -1, start
    while True:
        nxt = [w for w in members(G.adj[cur] & B) if w != prev and w != start]
        if not nxt or nxt[0] in order:
            return order
        prev, cur = cur, nxt[0]
        order.append(cur)


def _cor42(G, active, B, r, k):
    size = popcount(B)
    if _deg(G, r, active) > k or size > k:
        return None
    if popcount(G.adj[r] & active & ~B) >= size:
        return None
    if _hidden(G, r, B, active):
        y1 = r
    else:
        hid = [v for v in members(B) if _hidden(G, v, B, active)]
        if not hid:
            return None
        y1 = hid[0]
    middle = [v for v in members(B) if v not in (y1, r)]
    order = [y1] + middle + ([r] if r != y1 else [])
    if not _ordering_ok(G, order, active):
        return None
    return [Stage(tuple(order), "P+", "cor4.2")]


def _cor43(G, active, B, r, k):
    size = popcount(B)
    if _deg(G, r, active) > k or not (k + 1 <= size <= 2 * k):
        return None
    hidden = [v for v in members(B) if _hidden(G, v, B, active)]
    nbr_r = G.adj[r] & B
    candidates = []
    if r in hidden:
        for y in hidden:
            if y != r and not nbr_r >> y & 1:
                zs = [z for z in members(G.adj[y] & B) if z != r]
                candidates.append((r, y, zs[:1]))
    for y in hidden:
        if not nbr_r >> y & 1:
            continue
        for x in hidden:
            if x == y or G.adj[x] >> y & 1 or G.degree(y) < G.degree(x):
                continue
            if _deg(G, y, active) == 2:
                zs = [z for z in members(G.adj[y] & B) if z != r]
            else:
                zs = [z for z in members(G.adj[r] & B) if z not in (x, y)]
            candidates.append((x, y, zs[:1]))
    for x, y, zs in candidates:
        seed = (G.adj[y] & B) | (1 << y) | mask_of(zs)
        if seed >> x & 1:
            continue
        B2 = _grow(G, seed, B & ~(1 << x), k)
        if B2 is None:
            continue
        B1 = B & ~B2
        g1 = active & ~B2
        o1 = pelsmajer_ordering(G, members(B1), k, g1)
        o2 = pelsmajer_ordering(G, members(B2), k, active)
        if o1 is None or o2 is None:
            continue
        return [Stage(o1, "P+", "cor4.3"), Stage(o2, "P+", "cor4.3")]
    return None


def _grow(G: Graph, seed: int, allowed: int, k: int) -> int | None:
    """BFS-grow ``seed`` inside ``allowed`` to exactly k vertices."""
    if popcount(seed) > k or seed & ~allowed:
        return None
    cur = seed
    while popcount(cur) < k:
        frontier = members(G.neighborhood(cur) & allowed)
        if not frontier:
            return None
        cur |= 1 << frontier[0]
    return cur


def _cor44(G, active, B, r, k):
    if _deg(G, r, active) > 1:
        return None
    path = _path_order(G, r, B)
    if mask_of(path) != B:
        return None
    t = len(path)
    if 2 <= t <= k:
        return [Stage(tuple(path), "P+", "cor4.4")]
    if t == 1:
        if popcount(G.adj[r] & active) == 0:
            return [Stage((r,), "P+", "cor4.4")]
        if popcount(active) % k != 0:
            return [Stage((r,), "counting", "cor4.4")]
        return None
    # t > k: peel v1 v2, recurse on the rest inside G - v1 v2
    inner = _cor44(G, active & ~mask_of(path[:2]), mask_of(path[2:]), path[2], k)
    if inner is None:  # pragma: no cover - the inner path always qualifies
        return None
    return inner + [Stage(tuple(path[:2]), "P+", "cor4.4")]


def _cor45(G, active, B, r, k):
    if _deg(G, r, active) != 2:
        return None
    verts = members(B)
    if any(_deg(G, v, active) > 2 for v in verts):
        return None
    size = len(verts)
    n = popcount(active)
    out_edges = sum(popcount(G.adj[v] & active & ~B) for v in verts)
    ends = [v for v in verts if popcount(G.adj[v] & B) <= 1]
    if ends:
        path = _path_order(G, min(ends), B)
    else:  # cycle component
        path = _path_order(G, r, B)
    if mask_of(path) != B:
        return None

    def split(tag):
        B0, B1 = path[:-3], path[-3:]
        g1 = active & ~mask_of(B1)
        inner = _cor44(G, g1, mask_of(B0), B0[-1], k)
        o1 = pelsmajer_ordering(G, B1, k, active)
        if inner is None or o1 is None:
            return None
        return [Stage(s.order, s.method, tag) for s in inner] + [Stage(o1, "P+", tag)]

    if (out_edges == 0 and size <= k) or 3 <= size <= k:
        tag = "cor4.5(i)" if out_edges == 0 else "cor4.5(ii)"
        o = pelsmajer_ordering(G, path, k, active)
        if o is not None:
            return [Stage(o, "P+", tag)]
    if size >= 5 or (out_edges == 0 and size >= 4):
        st = split("cor4.5(i)" if out_edges == 0 else "cor4.5(iii)")
        if st is not None:
            return st
    if size == 1 and n % k not in (0, k - 1):
        return [Stage(tuple(path), "counting", "cor4.5(iv)")]
    if size == 2 and n % k not in (0, 1):
        return [Stage(tuple(path), "counting", "cor4.5(v)")]
    if size == 4 and k == 3 and n % 3 != 0:
        B0, B1 = path[:1], path[1:]
        g1 = active & ~mask_of(B1)
        inner = _cor44(G, g1, mask_of(B0), B0[0], k)
        o1 = pelsmajer_ordering(G, B1, k, active)
        if inner is not None and o1 is not None:
            return [Stage(s.order, s.method, "cor4.5(vi)") for s in inner] + \
                   [Stage(o1, "P+", "cor4.5(vi)")]
    return None


_RULES = (("cor4.2", _cor42), ("cor4.3", _cor43), ("cor4.4", _cor44), ("cor4.5", _cor45))


def validate_bug(G: Graph, B: int, r: int, active: int) -> None:
    if not B >> r & 1:
        raise PreconditionError("root must belong to the bug")
    if B & ~active:
        raise PreconditionError("bug must lie inside the graph")
    if G.component_of(r, B) != B:
        raise PreconditionError("a bug must be connected")
    if any(_deg(G, v, active) >= 3 for v in members(B) if v != r):
        raise PreconditionError("only the root of a bug may have degree >= 3")


def bug_safety(G: Graph, B: Bug | tuple, k: int, active: int | None = None) -> SafetyVerdict:
    """First applicable rule of the cascade (4.2, 4.3, 4.4, 4.5) or unknown.

    ``B`` is a :class:`Bug` or a pair ``(root, vertices)``.
    """
    if isinstance(B, Bug):
        r, bmask = B.root, mask_of(B.vertices)
    else:
        r, bmask = B[0], mask_of(B[1])
    act = G.full_mask if active is None else active
    validate_bug(G, bmask, r, act)
    for name, rule in _RULES:
        stages = rule(G, act, bmask, r, k)
        if stages is not None:
            label = stages[-1].rule if name == "cor4.5" else name
            return SafetyVerdict("safe", label, frozenset(members(bmask)), tuple(stages))
    return SafetyVerdict("unknown", None, frozenset(members(bmask)), (),
                         "no corollary hypothesis holds")


def compose_safety(G: Graph, S0, S1, v0: SafetyVerdict, v1: SafetyVerdict) -> SafetyVerdict:
    """S0 safe in G - S1 and S1 safe in G give S0 ∪ S1 safe in G.

    Both verdicts must use the vertex ids of G (``bug_safety(..., active=)``
    or :meth:`SafetyVerdict.relabel` produce such verdicts).
    """
    m0, m1 = mask_of(S0), mask_of(S1)
    if m0 & m1:
        raise PreconditionError("S0 and S1 must be disjoint")
    if m1 == 0:
        return v0
    if v0.status != "safe" or v1.status != "safe":
        return SafetyVerdict("unknown", None, frozenset(members(m0 | m1)), (),
                             "a component verdict is not safe")
    if mask_of(v0.target) != m0 or mask_of(v1.target) != m1:
        raise PreconditionError("verdict targets do not match S0, S1")
    return SafetyVerdict("safe", f"compose({v0.rule},{v1.rule})", frozenset(members(m0 | m1)),
                         v0.stages + v1.stages)


def replay_witness(G: Graph, verdict: SafetyVerdict, k: int, L=None, limit: int = 64) -> dict:
    """Extend up to ``limit`` SE colourings of G - target (found by the exact solver).

    Returns counts of colourings tried and of extensions failing ``is_SE``.
    """
    lists = normalize_lists(G, k, L)
    target = mask_of(verdict.target)
    H, parent = G.delete(target)
    sub = tuple(lists[p] for p in parent)
    tried = failed = 0
    for g in iter_colorings(H, k, sub, "SE"):
        if tried >= limit:
            break
        tried += 1
        f0 = {parent[v]: c for v, c in g.items()}
        try:
            f = apply_witness(G, verdict, k, lists, f0)
            ok = is_SE(G, k, lists, f)
        except ExtensionError:
            ok = False
        failed += not ok
    return {"colorings_tried": tried, "failures": failed}


def mod_context(G: Graph, k: int, active: int | None = None) -> dict:
    n = popcount(G.full_mask if active is None else active)
    return {"n": n, "n_mod_k": n % k, "mod_star": mod_star(n, k)}


__all__ = [
    "Stage", "SafetyVerdict", "ExtensionError", "PreconditionError", "pelsmajer_ordering",
    "extend_se", "apply_witness", "check_witness", "replay_witness", "bug_safety", "compose_safety", "bug_mask",
]
