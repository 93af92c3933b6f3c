"""Colouring predicates, an exact backtracking solver and choosability checks.

Conventions
-----------
* A list assignment ``L`` is a sequence indexed by vertex of non-empty sets
  of integer colours.  ``None`` means the uniform lists ``{1, ..., k}``.
* A colouring ``f`` is a ``dict`` vertex -> colour.
* With ``n = |G|`` and ``c = ceil(n/k)`` a colour class is *full* when it has
  exactly ``c`` vertices.  A colouring is SE when no class exceeds ``c`` and
  at most ``mod*(n, k)`` classes are full.
"""
from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

import numpy as np

from . import _kernels
from .graph import Graph, members, popcount
from .potential import mod_star

Lists = Sequence[frozenset]
Coloring = dict

MODES = ("SE", "equitable_list", "equitable_k")


class ColoringError(ValueError):
    pass


class PartialColoringError(ColoringError):
    pass


class ImproperColoringError(ColoringError):
    pass


class CapExceeded(ColoringError):
    pass


def uniform_lists(n: int, k: int) -> tuple[frozenset, ...]:
    base = frozenset(range(1, k + 1))
    return tuple(base for _ in range(n))


def normalize_lists(G: Graph, k: int, lists) -> tuple[frozenset, ...]:
    if lists is None:
        return uniform_lists(G.n, k)
    if isinstance(lists, Mapping):
        out = [frozenset(lists[v]) if v in lists else None for v in range(G.n)]
        if any(x is None for x in out) or len(lists) != G.n:
            raise ColoringError("list assignment must cover exactly the vertices of G")
    else:
        out = [frozenset(x) for x in lists]
        if len(out) != G.n:
            raise ColoringError("list assignment must cover exactly the vertices of G")
    if any(not x for x in out):
        raise ColoringError("every list must be non-empty")
    return tuple(out)


def se_bounds(n: int, k: int) -> tuple[int, int]:
    """``(ceil(n/k), mod*(n, k))`` - the class cap and the allowed number of full classes."""
    return -(-n // k), mod_star(n, k)


# ---------------------------------------------------------------------------
# predicates


def _check_total(G: Graph, f: Mapping[int, int]) -> None:
    missing = [v for v in range(G.n) if v not in f]
    if missing:
        raise PartialColoringError(f"colouring misses vertices {missing[:5]}")


def is_proper(G: Graph, L, f: Mapping[int, int]) -> bool:
    _check_total(G, f)
    if L is not None:
        lists = L if not isinstance(L, Mapping) else [L[v] for v in range(G.n)]
        if any(f[v] not in lists[v] for v in range(G.n)):
            return False
    return all(f[u] != f[v] for u, v in G.edges())


def class_sizes(f: Mapping[int, int]) -> Counter:
    return Counter(f.values())


def _full(sizes: Counter, n: int, k: int) -> frozenset:
    if n == 0:
        return frozenset()
    cap = -(-n // k)
    return frozenset(c for c, s in sizes.items() if s == cap)


def full_classes(G: Graph, k: int, f: Mapping[int, int]) -> frozenset:
    """``T(f)``: colours whose class has exactly ``ceil(|G|/k)`` vertices."""
    _check_total(G, f)
    return _full(class_sizes(f), G.n, k)


def _require_proper(G: Graph, f) -> None:
    _check_total(G, f)
    for u, v in G.edges():
        if f[u] == f[v]:
            raise ImproperColoringError(f"edge ({u},{v}) is monochromatic")


def is_equitable(G: Graph, k: int, f: Mapping[int, int], mode: str = "list") -> bool:
    _require_proper(G, f)
    sizes = class_sizes(f)
    if mode == "list":
        cap = -(-G.n // k)
        return all(s <= cap for s in sizes.values())
    if mode == "kcolor":
        if len(sizes) > k:
            return False
        counts = list(sizes.values()) + [0] * (k - len(sizes))
        return max(counts, default=0) - min(counts, default=0) <= 1
    raise ValueError(f"unknown mode {mode!r}")


def _se_sizes_ok(sizes: Counter, n: int, k: int) -> bool:
    if n == 0:
        return True
    cap, m = se_bounds(n, k)
    if any(s > cap for s in sizes.values()):
        return False
    return sum(1 for s in sizes.values() if s == cap) <= m


def is_SE(G: Graph, k: int, L, f: Mapping[int, int]) -> bool:
    _require_proper(G, f)
    if L is not None:
        lists = normalize_lists(G, k, L)
        if any(f[v] not in lists[v] for v in range(G.n)):
            raise ImproperColoringError("colouring uses a colour outside a list")
    return _se_sizes_ok(class_sizes(f), G.n, k)


def satisfies(G: Graph, k: int, L, f, mode: str) -> bool:
    if mode == "SE":
        return is_SE(G, k, L, f)
    if mode == "equitable_list":
        return is_proper(G, L, f) and is_equitable(G, k, f, "list")
    if mode == "equitable_k":
        return is_proper(G, L, f) and is_equitable(G, k, f, "kcolor")
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# exact solver


class _Search:
    """Backtracking over vertices with dynamic most-constrained-first ordering.

    Colours are indexed ``0..C-1`` internally; domains and forbidden sets are
    bitmasks over colour indices.  Class caps (and the SE bound on full
    classes) are enforced as colours are placed.  When the whole palette has
    exactly k colours, SE forces every class to have at least ``cap - 1``
    vertices, which is used for pruning.
    """

    def __init__(self, G: Graph, k: int, lists, mode: str, symmetry: bool):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        self.G = G
        self.n = n = G.n
        self.uniform = lists is None
        if mode == "equitable_k" and lists is not None:
            raise ColoringError("equitable_k mode uses the uniform lists {1..k}")
        L = normalize_lists(G, k, lists)
        palette = sorted(set().union(*L)) if n else []
        self.palette = palette
        index = {c: i for i, c in enumerate(palette)}
        self.dom = [sum(1 << index[c] for c in L[v]) for v in range(n)]
        self.C = len(palette)
        self.cap, m = se_bounds(n, k) if n else (0, k)
        self.full_limit = m if mode in ("SE", "equitable_k") else None
        self.lower = self.cap - 1 if (self.full_limit is not None and self.C == k) else 0
        self.symmetry = symmetry and (self.uniform or len(set(L)) == 1)
        self.colour = [-1] * n
        self.size = [0] * self.C
        self.forbid = [0] * n
        self.fcount = [[0] * self.C for _ in range(n)]
        self.full = 0
        self.deg = G.degrees()
        if mode == "equitable_k" and k < self.C:
            raise ColoringError("palette larger than k")

    def _blocked(self) -> int:
        b = 0
        for c in range(self.C):
            s = self.size[c]
            if s >= self.cap or (self.full_limit is not None and self.full >= self.full_limit
                                 and s == self.cap - 1):
                b |= 1 << c
        return b

    def _place(self, v: int, c: int) -> None:
        self.colour[v] = c
        self.size[c] += 1
        if self.size[c] == self.cap:
            self.full += 1
        bit = 1 << c
        for w in self.G.neighbors(v):
            fc = self.fcount[w]
            fc[c] += 1
            if fc[c] == 1:
                self.forbid[w] |= bit

    def _unplace(self, v: int, c: int) -> None:
        if self.size[c] == self.cap:
            self.full -= 1
        self.size[c] -= 1
        self.colour[v] = -1
        bit = 1 << c
        for w in self.G.neighbors(v):
            fc = self.fcount[w]
            fc[c] -= 1
            if fc[c] == 0:
                self.forbid[w] &= ~bit

    def _select(self, left: int):
        """Pick the uncoloured vertex with the fewest options; None on a dead end."""
        blocked = self._blocked()
        best = None
        best_key = None
        reach = [0] * self.C if self.lower else None
        for v in range(self.n):
            if self.colour[v] >= 0:
                continue
            avail = self.dom[v] & ~self.forbid[v] & ~blocked
            if avail == 0:
                return None
            if reach is not None:
                a = avail
                while a:
                    low = a & -a
                    reach[low.bit_length() - 1] += 1
                    a ^= low
            key = (popcount(avail), -self.deg[v], v)
            if best_key is None or key < best_key:
                best_key, best = key, (v, avail)
        if reach is not None:
            need = 0
            for c in range(self.C):
                short = self.lower - self.size[c]
                if short > 0:
                    if reach[c] < short:
                        return None
                    need += short
            if need > left:
                return None
        return best

    def run(self) -> Iterator[dict]:
        yield from self._rec(self.n)

    def _rec(self, left: int) -> Iterator[dict]:
        if left == 0:
            yield {v: self.palette[self.colour[v]] for v in range(self.n)}
            return
        pick = self._select(left)
        if pick is None:
            return
        v, avail = pick
        order = sorted(members(avail), key=lambda c: (self.size[c], c))
        if self.symmetry:
            seen_empty = False
            trimmed = []
            for c in order:
                if self.size[c] == 0:
                    if seen_empty:
                        continue
                    seen_empty = True
                trimmed.append(c)
            order = trimmed
        for c in order:
            self._place(v, c)
            yield from self._rec(left - 1)
            self._unplace(v, c)


SOLVER_CAP = 32


def solve(G: Graph, k: int, lists=None, mode: str = "SE", cap: int = SOLVER_CAP) -> dict | None:
    """A colouring of G meeting ``mode``'s predicate, or None if none exists."""
    if G.n > cap:
        raise CapExceeded(f"solver limited to {cap} vertices (got {G.n})")
    return next(_Search(G, k, lists, mode, symmetry=True).run(), None)


def iter_colorings(G: Graph, k: int, lists=None, mode: str = "SE", cap: int = SOLVER_CAP):
    """All colourings meeting ``mode`` (no symmetry reduction)."""
    if G.n > cap:
        raise CapExceeded(f"solver limited to {cap} vertices (got {G.n})")
    return _Search(G, k, lists, mode, symmetry=False).run()


def brute_force_colorings(G: Graph, k: int, lists=None, mode: str = "SE") -> Iterator[dict]:
    """Reference enumerator: product over lists filtered by the predicate (tiny graphs only)."""
    L = normalize_lists(G, k, lists)
    for combo in itertools.product(*[sorted(x) for x in L]):
        f = dict(enumerate(combo))
        if all(f[u] != f[v] for u, v in G.edges()) and satisfies(G, k, L, f, mode):
            yield f


# ---------------------------------------------------------------------------
# choosability


@dataclass(frozen=True)
class ChoosabilityVerdict:
    status: str                      # "yes" | "no" | "budget_exceeded"
    mode: str
    method: str
    examined: int
    total: int | None = None         # number of canonical assignments, when known
    witness: tuple | None = None     # violating list assignment for "no"

    def to_json(self) -> dict:
        return {
            "status": self.status, "mode": self.mode, "method": self.method,
            "examined": self.examined, "total": self.total,
            "witness": None if self.witness is None else
            {str(v): sorted(L) for v, L in enumerate(self.witness)},
        }


CHOOSABLE_CAP = 10


@lru_cache(maxsize=6)
def families(n: int, k: int, intersecting: bool = True) -> np.ndarray:
    """All canonical k-list families on n vertices (cached per process)."""
    arr = _kernels.build_families(n, k, intersecting)
    arr.setflags(write=False)
    return arr


def family_to_lists(row, n: int) -> tuple[frozenset, ...]:
    sets = [int(x) for x in row if x]
    return tuple(frozenset(j + 1 for j, m in enumerate(sets) if m >> v & 1) for v in range(n))


def lists_to_family(lists: Sequence[frozenset]) -> list[int]:
    occ: dict[int, int] = {}
    for v, L in enumerate(lists):
        for c in L:
            occ[c] = occ.get(c, 0) | (1 << v)
    return sorted(occ.values())


def merge_disjoint(lists: Sequence[frozenset], rng: random.Random | None = None) -> tuple[frozenset, ...]:
    """Repeatedly identify two colours whose occurrence sets are disjoint.

    The merged assignment is at least as hard: any colouring from it splits
    back into a colouring from the original lists with no class larger and
    no more full classes.
    """
    occ: dict[int, int] = {}
    for v, L in enumerate(lists):
        for c in L:
            occ[c] = occ.get(c, 0) | (1 << v)
    sets = list(occ.values())
    while True:
        pairs = [(i, j) for i in range(len(sets)) for j in range(i + 1, len(sets))
                 if sets[i] & sets[j] == 0]
        if not pairs:
            break
        i, j = rng.choice(pairs) if rng is not None else pairs[0]
        sets[i] |= sets[j]
        del sets[j]
    n = len(lists)
    return tuple(frozenset(c + 1 for c, m in enumerate(sets) if m >> v & 1) for v in range(n))


def _kernel_inputs(G: Graph, k: int, mode: str):
    n = G.n
    adj = np.array(G.adj, dtype=np.int64) if n else np.zeros(0, dtype=np.int64)
    order = np.array(sorted(range(n), key=lambda v: (-G.degree(v), v)), dtype=np.int64)
    cap, m = se_bounds(n, k) if n else (1, k)
    return adj, order, cap, m, mode == "SE"


def _solver_mode(mode: str) -> str:
    if mode == "SE":
        return "SE"
    if mode in ("equitable", "equitable_list"):
        return "equitable_list"
    raise ValueError(f"choosability mode must be SE or equitable, got {mode!r}")


def random_lists(n: int, k: int, rng: random.Random, pool: int | None = None) -> tuple[frozenset, ...]:
    size = pool if pool is not None else rng.randint(k, k + max(1, n))
    colours = list(range(1, size + 1))
    return tuple(frozenset(rng.sample(colours, k)) for _ in range(n))


def is_choosable(
    G: Graph,
    k: int,
    mode: str = "SE",
    budget: int | None = None,
    method: str = "exhaustive",
    *,
    reduce: bool = True,
    engine: str = "numba",
    samples: int = 200,
    seed: int = 0,
    workers: int = 1,
    cap: int = CHOOSABLE_CAP,
) -> ChoosabilityVerdict:
    """Decide (or refute) SE / equitable k-choosability.

    ``exhaustive`` walks every k-list assignment up to colour renaming.  With
    ``reduce`` (the default) only assignments whose colour occurrence sets
    pairwise intersect are walked: any two colours with disjoint occurrence
    sets can be identified without making the instance easier, so those
    assignments are the hardest ones and suffice.  ``budget`` caps the number
    of assignments examined.

    ``sampled`` tries random assignments (each hardened by merging disjoint
    colours); it can only answer "no" or "budget_exceeded".
    """
    smode = _solver_mode(mode)
    n = G.n
    if method == "sampled":
        rng = random.Random(seed)
        for i in range(samples):
            L = random_lists(n, k, rng)
            if rng.random() < 0.5:
                L = merge_disjoint(L, rng)
            if solve(G, k, L, smode) is None:
                return ChoosabilityVerdict("no", mode, "sampled", i + 1, None, L)
        return ChoosabilityVerdict("budget_exceeded", mode, "sampled", samples)
    if method != "exhaustive":
        raise ValueError(f"unknown method {method!r}")
    if n > cap:
        raise CapExceeded(f"exhaustive choosability limited to {cap} vertices (got {n})")

    if engine == "python":
        examined = 0
        for fam in _kernels.iter_families_py(n, k, reduce):
            if budget is not None and examined >= budget:
                return ChoosabilityVerdict("budget_exceeded", mode, "exhaustive", examined)
            examined += 1
            L = tuple(frozenset(j + 1 for j, m in enumerate(fam) if m >> v & 1) for v in range(n))
            if solve(G, k, L, smode) is None:
                return ChoosabilityVerdict("no", mode, "exhaustive", examined, None, L)
        return ChoosabilityVerdict("yes", mode, "exhaustive", examined, examined)

    truncated = False
    if budget is not None:
        count = _kernels.count_families(n, k, reduce, limit=budget + 1)
        if count > budget:
            fam = _kernels.build_families(n, k, reduce, limit=budget)
            truncated = True
        else:
            fam = families(n, k, reduce)
    else:
        fam = families(n, k, reduce)
    total = None if truncated else int(fam.shape[0])
    adj, order, ccap, m, se = _kernel_inputs(G, k, smode)
    hit = _scan(n, k, adj, order, fam, ccap, m, se, workers)
    if hit >= 0:
        L = family_to_lists(fam[hit], n)
        if solve(G, k, L, smode) is not None:  # pragma: no cover - kernel/solver disagreement
            raise AssertionError("kernel reported an uncolourable assignment the solver can colour")
        return ChoosabilityVerdict("no", mode, "exhaustive", hit + 1, total, L)
    if truncated:
        return ChoosabilityVerdict("budget_exceeded", mode, "exhaustive", int(fam.shape[0]))
    return ChoosabilityVerdict("yes", mode, "exhaustive", int(fam.shape[0]), total)


def _scan(n, k, adj, order, fam, cap, m, se, workers: int) -> int:
    rows = fam.shape[0]
    if workers <= 1 or rows < 1024:
        return int(_kernels.first_uncolorable(n, k, adj, order, fam, cap, m, se, 0, rows))
    bounds = np.linspace(0, rows, workers + 1).astype(int)
    with ThreadPoolExecutor(workers) as pool:
        futs = [pool.submit(_kernels.first_uncolorable, n, k, adj, order, fam, cap, m, se,
                            int(bounds[i]), int(bounds[i + 1])) for i in range(workers)]
        hits = [int(f.result()) for f in futs]
    hits = [h for h in hits if h >= 0]
    return min(hits) if hits else -1
