"""Desk-scale check of the main theorem: sparse connected graphs are SE k-choosable.

Two tiers:

* ``exhaustive`` - every connected graph on n vertices (one per isomorphism
  class) with ``rho_G^k(S) <= 2 - sigma_G^k`` for all S is checked against
  every canonical k-list assignment.  A "yes" is a proof for that graph.
* ``random`` - connected graphs drawn from a seeded sampler, filtered the
  same way, checked with sampled (and hardened) list assignments plus the
  uniform lists.  Only a "no" would be conclusive there.

Reports contain no timing unless asked for, so equal seeds give
byte-identical output.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .coloring import ChoosabilityVerdict, is_choosable, solve, uniform_lists
from .enumerate import connected_graphs, random_connected_graph
from .graph import Graph
from .potential import max_potential, sigma

EXHAUSTIVE_MAX_N = 8


def satisfies_hypothesis(G: Graph, k: int) -> bool:
    return max_potential(G, k, "flow").value <= 2 - sigma(G, k)


@dataclass
class TierResult:
    n: int
    tier: str                   # "exhaustive" | "random"
    graphs_seen: int = 0
    graphs_checked: int = 0     # those satisfying the hypothesis
    verdicts: dict = field(default_factory=lambda: {"yes": 0, "no": 0, "budget_exceeded": 0})
    complete: bool = True
    seconds: float | None = None

    def to_json(self) -> dict:
        d = {"n": self.n, "tier": self.tier, "graphs_seen": self.graphs_seen,
             "graphs_checked": self.graphs_checked, "verdicts": dict(self.verdicts),
             "complete": self.complete}
        if self.seconds is not None:
            d["seconds"] = round(self.seconds, 3)
        return d


@dataclass
class TheoremReport:
    k: int
    seed: int
    tiers: list[TierResult]
    violations: list[dict]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"k": self.k, "seed": self.seed, "ok": self.ok,
                "violations": self.violations, "tiers": [t.to_json() for t in self.tiers]}


def _record(tier: TierResult, G: Graph, verdict, violations: list) -> None:
    tier.verdicts[verdict.status] += 1
    if verdict.status == "no":
        violations.append({"n": G.n, "graph": G.to_json(), "tier": tier.tier,
                           "verdict": verdict.to_json()})


def run_exhaustive(k: int, n: int, violations: list, workers: int = 1,
                   timing: bool = False) -> TierResult:
    if n > EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive tier supports n <= {EXHAUSTIVE_MAX_N}")
    t0 = time.perf_counter()
    tier = TierResult(n, "exhaustive")
    for G in connected_graphs(n):
        tier.graphs_seen += 1
        if not satisfies_hypothesis(G, k):
            continue
        tier.graphs_checked += 1
        v = is_choosable(G, k, "SE", method="exhaustive", workers=workers)
        _record(tier, G, v, violations)
    if timing:
        tier.seconds = time.perf_counter() - t0
    return tier


def sample_sparse_graphs(k: int, n: int, count: int, rng: random.Random,
                         max_tries: int | None = None):
    """Up to ``count`` seeded random connected graphs meeting the hypothesis."""
    tries = 0
    limit = max_tries if max_tries is not None else 200 * count
    out = []
    while len(out) < count and tries < limit:
        tries += 1
        # sparse graphs: a spanning tree plus roughly n/4 extra edges on average
        G = random_connected_graph(n, rng, rng.uniform(0.0, 0.6 / n))
        if satisfies_hypothesis(G, k):
            out.append(G)
    return out, tries


def run_random(k: int, n: int, count: int, seed: int, violations: list,
               samples: int = 100, timing: bool = False) -> TierResult:
    t0 = time.perf_counter()
    rng = random.Random(f"{seed}:{k}:{n}")
    graphs, tries = sample_sparse_graphs(k, n, count, rng)
    tier = TierResult(n, "random", graphs_seen=tries, complete=False)
    for G in graphs:
        tier.graphs_checked += 1
        if solve(G, k, None, "SE") is None:
            v = ChoosabilityVerdict("no", "SE", "uniform", 1, None, uniform_lists(G.n, k))
        else:
            v = is_choosable(G, k, "SE", method="sampled", samples=samples,
                             seed=rng.randrange(1 << 30))
        _record(tier, G, v, violations)
    if timing:
        tier.seconds = time.perf_counter() - t0
    return tier


def verify_theorem(k: int, nmin: int = 1, nmax: int = 6, sampler: str = "exhaustive",
                   seed: int = 0, count: int = 200, workers: int = 1,
                   samples: int = 100, timing: bool = False) -> TheoremReport:
    """Check every graph in the requested range; see the module docstring."""
    if k not in (3, 4):
        raise ValueError("k must be 3 or 4")
    violations: list[dict] = []
    tiers = []
    for n in range(nmin, nmax + 1):
        if sampler == "exhaustive":
            tiers.append(run_exhaustive(k, n, violations, workers, timing))
        elif sampler == "random":
            tiers.append(run_random(k, n, count, seed, violations, samples, timing))
        else:
            raise ValueError(f"unknown sampler {sampler!r}")
    return TheoremReport(k, seed, tiers, violations)
