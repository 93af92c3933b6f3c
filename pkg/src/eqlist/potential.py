"""Potential function arithmetic for k in {3, 4}.

    rho(A) = eps * ||G[A]|| - nu * |A| + (eps/2) * |A ∩ V1(G)|

with (eps, nu) = (6, 7) for k = 3 and (4, 5) for k = 4.  Leaves are the
leaves of the ambient graph G, not of G[A].

Maximisation over vertex subsets is a closure (project selection) problem:
an edge pays eps when both ends are chosen, a vertex costs nu (or nu - eps/2
for a leaf).  It is solved exactly with one min-cut; the cut lattice gives
both the smallest and the largest maximiser for free.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np

from ._flow import FlowNetwork
from .graph import Graph, mask_of, members, popcount


@dataclass(frozen=True)
class PotentialParams:
    k: int
    epsilon: int
    nu: int

    @property
    def delta(self) -> int:
        return self.nu - self.epsilon

    @property
    def half_eps(self) -> int:
        return self.epsilon // 2


_PARAMS = {3: PotentialParams(3, 6, 7), 4: PotentialParams(4, 4, 5)}


def params(k: int) -> PotentialParams:
    try:
        return _PARAMS[k]
    except KeyError:
        raise ValueError(f"potential is defined for k in {{3, 4}}, got {k}") from None


def mod_star(n: int, k: int) -> int:
    """The unique m in 1..k with k | n - m."""
    if k <= 0:
        raise ValueError("k must be positive")
    m = n % k
    return m if m else k


def sigma(G: Graph, k: int) -> int:
    params(k)
    if k == 3:
        return 0
    return popcount(G.leaves_mask()) % 2


def potential_of_subset(G: Graph, k: int, A: Iterable[int] | int) -> int:
    p = params(k)
    a = mask_of(A)
    return (p.epsilon * G.edges_in(a) - p.nu * popcount(a)
            + p.half_eps * popcount(a & G.leaves_mask()))


def check_supermodularity(G: Graph, k: int, A, B) -> bool:
    a, b = mask_of(A), mask_of(B)
    rho = lambda x: potential_of_subset(G, k, x)  # noqa: E731
    return rho(a) + rho(b) <= rho(a | b) + rho(a & b)


@dataclass(frozen=True)
class PotentialResult:
    value: int
    witness: frozenset
    extreme_union: frozenset
    method: str

    def to_json(self) -> dict:
        return {"value": self.value, "witness": sorted(self.witness),
                "extreme_union": sorted(self.extreme_union), "method": self.method}


# ---------------------------------------------------------------------------
# closure maximisation:  max_A  w * e(A) - sum_{v in A} cost[v]


def _closure_max(G: Graph, w: int, cost: list[int], forced: int = 0):
    """Return (value, min_maximiser_mask, max_maximiser_mask).

    ``w >= 0`` is the profit per induced edge; ``cost`` may be negative.
    Vertices in ``forced`` must be selected.
    """
    edges = G.edges()
    n, m = G.n, len(edges)
    s, t = n + m, n + m + 1
    net = FlowNetwork(n + m + 2)
    base = 0
    inf = w * m + sum(abs(c) for c in cost) + 1
    for j, (u, v) in enumerate(edges):
        if w > 0:
            net.add_arc(s, n + j, w)
            base += w
        net.add_arc(n + j, u, inf)
        net.add_arc(n + j, v, inf)
    for v in range(n):
        if forced >> v & 1:
            net.add_arc(s, v, inf)
        if cost[v] > 0:
            net.add_arc(v, t, cost[v])
        elif cost[v] < 0:
            net.add_arc(s, v, -cost[v])
            base += -cost[v]
    cut = net.max_flow(s, t)  # forced arcs are infinite, so never cut
    lo = net.residual_reachable(s)
    hi_block = net.residual_coreachable(t)
    lo_mask = mask_of(v for v in range(n) if lo[v])
    hi_mask = mask_of(v for v in range(n) if not hi_block[v])
    value = base - cut
    return value, lo_mask, hi_mask


def _rho_costs(G: Graph, k: int) -> list[int]:
    p = params(k)
    leaves = G.leaves_mask()
    return [p.nu - (p.half_eps if leaves >> v & 1 else 0) for v in range(G.n)]


def _max_flow_method(G: Graph, k: int) -> PotentialResult:
    p = params(k)
    value, lo, hi = _closure_max(G, p.epsilon, _rho_costs(G, k))
    return PotentialResult(value, frozenset(members(lo)), frozenset(members(hi)), "flow")


BRUTE_CAP = 26
_CHUNK = 1 << 18


def _brute_values(G: Graph, k: int, start: int, stop: int) -> np.ndarray:
    p = params(k)
    masks = np.arange(start, stop, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(G.n, dtype=np.int64)) & 1).astype(np.int32)
    size = bits.sum(axis=1)
    leafv = np.array([1 if G.degree(v) == 1 else 0 for v in range(G.n)], dtype=np.int32)
    nleaf = bits @ leafv if G.n else np.zeros(len(masks), dtype=np.int32)
    ecount = np.zeros(len(masks), dtype=np.int32)
    for u, v in G.edges():
        ecount += bits[:, u] & bits[:, v]
    return p.epsilon * ecount - p.nu * size + p.half_eps * nleaf


def _max_brute(G: Graph, k: int, cap: int = BRUTE_CAP) -> PotentialResult:
    if G.n > cap:
        raise ValueError(f"brute-force maximisation limited to {cap} vertices (got {G.n})")
    total = 1 << G.n
    best = None
    inter = union = 0
    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        vals = _brute_values(G, k, start, stop)
        mx = int(vals.max())
        hits = np.nonzero(vals == mx)[0] + start
        if best is None or mx > best:
            best = mx
            inter = int(np.bitwise_and.reduce(hits))
            union = int(np.bitwise_or.reduce(hits))
        elif mx == best:
            inter &= int(np.bitwise_and.reduce(hits))
            union |= int(np.bitwise_or.reduce(hits))
    return PotentialResult(int(best), frozenset(members(inter)), frozenset(members(union)), "brute")


def max_potential(G: Graph, k: int, method: str = "flow", cap: int = BRUTE_CAP) -> PotentialResult:
    """Exact ``max_A rho(A)`` (A = ∅ included).

    ``witness`` is the smallest maximiser (the intersection of all of them) and
    ``extreme_union`` the largest (their union); both are unique by
    supermodularity, so the two methods agree set-for-set.
    """
    params(k)
    if method == "flow":
        return _max_flow_method(G, k)
    if method == "brute":
        return _max_brute(G, k, cap)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# sparseness and maximum average degree


class SparsenessResult(NamedTuple):
    ok: bool
    witness: frozenset | None
    excess: Fraction


def _max_nonempty(G: Graph, w: int, cost: list[int]):
    """Max of ``w e(A) - cost(A)`` over nonempty A, with a maximiser."""
    value, lo, hi = _closure_max(G, w, cost)
    if hi:
        return value, hi
    # only the empty set attains the unconstrained max: force each vertex in turn
    best, arg = None, 0
    for v in range(G.n):
        val, lo_v, _ = _closure_max(G, w, cost, forced=1 << v)
        if best is None or val > best:
            best, arg = val, lo_v | (1 << v)
    return best, arg


def check_sparseness(G: Graph, num: int, den: int, add) -> SparsenessResult:
    """Is ``den*||G[A]|| <= num*|A| + den*add`` for every nonempty A?"""
    if den <= 0:
        raise ValueError("den must be positive")
    add = Fraction(add)
    if G.n == 0:
        return SparsenessResult(True, None, Fraction(0))
    q = add.denominator
    # scale by q:  q*den*e(A) - q*num*|A| <= den*add.numerator
    value, arg = _max_nonempty(G, q * den, [q * num] * G.n)
    excess = Fraction(value - den * add.numerator, q)
    if excess > 0:
        return SparsenessResult(False, frozenset(members(arg)), excess)
    return SparsenessResult(True, None, excess)


def max_average_degree(G: Graph) -> Fraction:
    """``max_H 2||H||/|H|`` by Dinkelbach iteration on the closure engine."""
    if G.n == 0:
        raise ValueError("maximum average degree of the empty graph is undefined")
    lam = Fraction(2 * G.m, G.n)
    while True:
        # max 2 q e(A) - p |A| for lam = p/q
        p, q = lam.numerator, lam.denominator
        value, lo, hi = _closure_max(G, 2 * q, [p] * G.n)
        if value <= 0:
            return lam
        lam = Fraction(2 * G.edges_in(hi), popcount(hi))
