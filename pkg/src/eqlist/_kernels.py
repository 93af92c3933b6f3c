"""Numba kernels for exhaustive list-assignment enumeration.

A k-list assignment on n vertices is, up to renaming colours, a multiset of
nonempty vertex sets (the occurrence set of each colour) in which every
vertex lies in exactly k sets.  Families are enumerated in canonical order:
sets are keyed by (lowest vertex, mask); the next set always contains the
lowest vertex whose demand is not yet met, and sets sharing a lowest vertex
appear with nondecreasing masks.  Every multiset is produced exactly once.

With ``intersecting`` the enumeration is restricted to pairwise intersecting
families (see ``coloring.is_choosable`` for why that loses nothing).

Families are stored row-wise in a small unsigned array, zero padded.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def enum_families(n, k, intersecting, out, fill, limit):
    """Count (and with ``fill`` write into ``out``) canonical families.

    Stops once ``limit`` families have been produced when ``limit > 0``.
    Returns the number of families produced.
    """
    maxd = n * k + 1
    sets = np.zeros(maxd, dtype=np.int64)
    xat = np.zeros(maxd, dtype=np.int64)
    start = np.zeros(maxd, dtype=np.int64)
    amask = np.zeros(maxd, dtype=np.int64)
    vat = np.zeros(maxd, dtype=np.int64)
    fresh = np.zeros(maxd, dtype=np.bool_)
    deficit = np.full(n, k, dtype=np.int64)
    count = 0
    if n == 0:
        return 1
    depth = 0
    amask[0] = ((1 << n) - 1) >> 1
    fresh[0] = True
    while depth >= 0:
        v = vat[depth]
        low = 1 << v
        A = amask[depth]
        found = False
        m = 0
        while True:
            # iterate the submasks x of A in increasing order
            if fresh[depth]:
                x = 0
                fresh[depth] = False
            else:
                x = (xat[depth] - A) & A
                if x == 0:
                    break
            xat[depth] = x
            if x < start[depth]:
                continue
            m = low | (x << (v + 1))
            ok = True
            if intersecting:
                for t in range(depth):
                    if (sets[t] & m) == 0:
                        ok = False
                        break
            if ok:
                found = True
                break
        if not found:
            depth -= 1
            if depth >= 0:
                mm = sets[depth]
                for w in range(n):
                    if (mm >> w) & 1:
                        deficit[w] += 1
            continue
        sets[depth] = m
        rem = 0
        for w in range(n):
            if (m >> w) & 1:
                deficit[w] -= 1
            if deficit[w] > 0:
                rem |= 1 << w
        if rem == 0:
            if fill:
                for t in range(depth + 1):
                    out[count, t] = sets[t]
            count += 1
            for w in range(n):
                if (m >> w) & 1:
                    deficit[w] += 1
            if limit > 0 and count >= limit:
                return count
            continue
        if intersecting:
            # every later set meets rem, so each chosen set must meet it too
            dead = False
            for t in range(depth + 1):
                if (sets[t] & rem) == 0:
                    dead = True
                    break
            if dead:
                for w in range(n):
                    if (m >> w) & 1:
                        deficit[w] += 1
                continue
        nv = 0
        while deficit[nv] == 0:
            nv += 1
        depth += 1
        vat[depth] = nv
        amask[depth] = rem >> (nv + 1)
        fresh[depth] = True
        if (m & -m) == (1 << nv):
            start[depth] = m >> (nv + 1)
        else:
            start[depth] = 0
    return count


@njit(cache=True, nogil=True)
def colorable(n, adj, order, row, cap, full_limit, se, lists, cnt, size, cmask, choice, col):
    """Is there a proper colouring from the family ``row`` with class caps?

    Colour j is available at v iff bit v of ``row[j]``.  Every class has at
    most ``cap`` vertices; with ``se`` at most ``full_limit`` classes reach
    ``cap``.  The remaining arguments are scratch buffers.
    """
    nsets = 0
    while nsets < row.shape[0] and row[nsets] != 0:
        nsets += 1
    for v in range(n):
        cnt[v] = 0
        col[v] = -1
        choice[v] = 0
    for j in range(nsets):
        m = np.int64(row[j])
        size[j] = 0
        cmask[j] = 0
        for v in range(n):
            if (m >> v) & 1:
                lists[v, cnt[v]] = j
                cnt[v] += 1
    full = 0
    i = 0
    while True:
        if i == n:
            return True
        if i < 0:
            return False
        u = order[i]
        if col[u] >= 0:
            j = col[u]
            if size[j] == cap:
                full -= 1
            size[j] -= 1
            cmask[j] &= ~(np.int64(1) << u)
            col[u] = -1
        placed = False
        while choice[i] < cnt[u]:
            j = lists[u, choice[i]]
            choice[i] += 1
            if cmask[j] & adj[u]:
                continue
            if size[j] + 1 > cap:
                continue
            nf = full + (1 if size[j] + 1 == cap else 0)
            if se and nf > full_limit:
                continue
            size[j] += 1
            full = nf
            cmask[j] |= np.int64(1) << u
            col[u] = j
            placed = True
            break
        if placed:
            i += 1
            if i < n:
                choice[i] = 0
        else:
            choice[i] = 0
            i -= 1


@njit(cache=True, nogil=True)
def first_uncolorable(n, k, adj, order, fam, cap, full_limit, se, lo, hi):
    """Index of the first family in ``fam[lo:hi]`` without a valid colouring, or -1."""
    width = fam.shape[1]
    lists = np.empty((n, width if width > k else k), dtype=np.int64)
    cnt = np.zeros(n, dtype=np.int64)
    size = np.zeros(width, dtype=np.int64)
    cmask = np.zeros(width, dtype=np.int64)
    choice = np.zeros(n, dtype=np.int64)
    col = np.zeros(n, dtype=np.int64)
    for f in range(lo, hi):
        if not colorable(n, adj, order, fam[f], cap, full_limit, se,
                         lists, cnt, size, cmask, choice, col):
            return f
    return -1


def family_width(n: int, k: int, intersecting: bool) -> int:
    """Upper bound on the number of distinct colours in a family.

    Without restriction a family has at most nk sets.  In an intersecting
    family either some set is a singleton {v} (then every set contains v, so
    there are at most k sets) or all sets have size >= 2 (at most nk/2).
    """
    if not intersecting:
        return max(1, n * k)
    return max(k, n * k // 2, 1)


def family_dtype(n: int):
    return np.uint8 if n <= 8 else np.uint16


def build_families(n: int, k: int, intersecting: bool = True, limit: int = 0) -> np.ndarray:
    """Materialise the canonical families as an array (count, width)."""
    if n > 16:
        raise ValueError("family storage supports at most 16 vertices")
    dt = family_dtype(n)
    dummy = np.zeros((1, 1), dtype=dt)
    count = enum_families(n, k, intersecting, dummy, False, limit)
    out = np.zeros((count, family_width(n, k, intersecting)), dtype=dt)
    if n == 0:
        return out
    enum_families(n, k, intersecting, out, True, count)
    return out


def count_families(n: int, k: int, intersecting: bool = True, limit: int = 0) -> int:
    dummy = np.zeros((1, 1), dtype=family_dtype(n))
    return int(enum_families(n, k, intersecting, dummy, False, limit))


# ---------------------------------------------------------------------------
# pure-Python reference (used by tests as an independent implementation)


def iter_families_py(n: int, k: int, intersecting: bool = True):
    """Generator over canonical families as tuples of masks; slow, for n <= 6."""
    deficit = [k] * n
    sets: list[int] = []

    def rec():
        v = next((i for i in range(n) if deficit[i] > 0), None)
        if v is None:
            yield tuple(sets)
            return
        avail = sum(1 << i for i in range(n) if deficit[i] > 0)
        rest = avail & ~((1 << (v + 1)) - 1)
        cands = []
        sub = rest
        while True:
            cands.append((1 << v) | sub)
            if sub == 0:
                break
            sub = (sub - 1) & rest
        for m in sorted(cands):
            if sets and (sets[-1] & -sets[-1]) == (1 << v) and m < sets[-1]:
                continue
            if intersecting and any(m & s == 0 for s in sets):
                continue
            sets.append(m)
            for i in range(n):
                if m >> i & 1:
                    deficit[i] -= 1
            yield from rec()
            for i in range(n):
                if m >> i & 1:
                    deficit[i] += 1
            sets.pop()

    if n == 0:
        yield ()
        return
    yield from rec()
