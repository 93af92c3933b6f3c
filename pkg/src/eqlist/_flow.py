"""Dinic max-flow on small integer networks, plus min-cut side extraction.

The networks built here have a few dozen nodes, so a plain adjacency-list
implementation is more than fast enough and keeps the dependency list short.
"""
from __future__ import annotations

from collections import deque


class FlowNetwork:
    def __init__(self, n: int):
        self.n = n
        # each arc: [head, residual capacity, index of reverse arc]
        self.arcs: list[list[list[int]]] = [[] for _ in range(n)]

    def add_arc(self, u: int, v: int, cap: int) -> None:
        self.arcs[u].append([v, cap, len(self.arcs[v])])
        self.arcs[v].append([u, 0, len(self.arcs[u]) - 1])

    def _levels(self, s: int, t: int):
        level = [-1] * self.n
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for v, cap, _ in self.arcs[u]:
                if cap > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    q.append(v)
        return level if level[t] >= 0 else None

    def _augment(self, s: int, t: int, level, it) -> int:
        # iterative DFS along the level graph; returns the bottleneck pushed
        stack = [s]
        path: list[tuple[int, int]] = []
        while stack:
            u = stack[-1]
            if u == t:
                push = min(self.arcs[a][i][1] for a, i in path)
                for a, i in path:
                    arc = self.arcs[a][i]
                    arc[1] -= push
                    self.arcs[arc[0]][arc[2]][1] += push
                return push
            advanced = False
            while it[u] < len(self.arcs[u]):
                v, cap, _ = self.arcs[u][it[u]]
                if cap > 0 and level[v] == level[u] + 1:
                    path.append((u, it[u]))
                    stack.append(v)
                    advanced = True
                    break
                it[u] += 1
            if not advanced:
                level[u] = -1  # dead end
                stack.pop()
                if path:
                    a, i = path.pop()
                    it[a] += 1
        return 0

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while True:
            level = self._levels(s, t)
            if level is None:
                return total
            it = [0] * self.n
            while True:
                pushed = self._augment(s, t, level, it)
                if pushed == 0:
                    break
                total += pushed

    def residual_reachable(self, s: int) -> list[bool]:
        """Nodes reachable from s in the residual network (minimal source side)."""
        seen = [False] * self.n
        seen[s] = True
        q = deque([s])
        while q:
            u = q.popleft()
            for v, cap, _ in self.arcs[u]:
                if cap > 0 and not seen[v]:
                    seen[v] = True
                    q.append(v)
        return seen

    def residual_coreachable(self, t: int) -> list[bool]:
        """Nodes that can still reach t in the residual network.

        The complement is the maximal source side of a minimum cut.
        """
        seen = [False] * self.n
        seen[t] = True
        q = deque([t])
        while q:
            v = q.popleft()
            for u, _, rev in self.arcs[v]:
                # residual arc u -> v exists iff the reverse of (v -> u) has capacity
                if not seen[u] and self.arcs[u][rev][1] > 0:
                    seen[u] = True
                    q.append(u)
        return seen
