"""Small integer max-flow engine (Dinic phases, iterative blocking flow).

Arcs are stored in pairs: arc ``a`` and its residual partner ``a ^ 1``.  A
pair may carry capacity in both directions, which models an undirected
edge of capacity one.  Adjacency lists keep insertion order, so the flow
found is a deterministic function of the order in which arcs were added.
"""

from __future__ import annotations

from collections import deque

INF = 1 << 40


class FlowNetwork:
    def __init__(self, n: int = 0):
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.head: list[int] = []
        self.cap: list[int] = []
        self.orig: list[int] = []
        self.tag: list[object] = []

    @property
    def n(self) -> int:
        return len(self.adj)

    def add_node(self) -> int:
        self.adj.append([])
        return len(self.adj) - 1

    def add_arc(self, u: int, v: int, cap: int, tag=None, rev_cap: int = 0) -> int:
        a = len(self.head)
        self.head += (v, u)
        self.cap += (cap, rev_cap)
        self.orig += (cap, rev_cap)
        self.tag += (tag, tag)
        self.adj[u].append(a)
        self.adj[v].append(a + 1)
        return a

    def tail(self, a: int) -> int:
        return self.head[a ^ 1]

    def flow(self, a: int) -> int:
        """Net flow pushed along arc `a` in its own direction (may be negative)."""
        return self.orig[a] - self.cap[a]

    def _levels(self, s: int, t: int) -> list[int] | None:
        level = [-1] * self.n
        level[s] = 0
        queue = deque([s])
        head, cap = self.head, self.cap
        while queue:
            u = queue.popleft()
            for a in self.adj[u]:
                v = head[a]
                if cap[a] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[t] >= 0 else None

    def _blocking(self, s: int, t: int, level: list[int], limit: int) -> int:
        head, cap, adj = self.head, self.cap, self.adj
        it = [0] * self.n
        total = 0
        while total < limit:
            path: list[int] = []
            u = s
            while u != t:
                arcs = adj[u]
                i = it[u]
                while i < len(arcs):
                    a = arcs[i]
                    if cap[a] > 0 and level[head[a]] == level[u] + 1:
                        break
                    i += 1
                it[u] = i
                if i == len(arcs):
                    if u == s:
                        return total
                    level[u] = -1
                    a = path.pop()
                    u = head[a ^ 1]
                    it[u] += 1
                    continue
                path.append(arcs[i])
                u = head[arcs[i]]
            f = min(min(cap[a] for a in path), limit - total)
            for a in path:
                cap[a] -= f
                cap[a ^ 1] += f
            total += f
        return total

    def max_flow(self, s: int, t: int, limit: int = INF) -> int:
        total = 0
        while total < limit:
            level = self._levels(s, t)
            if level is None:
                break
            pushed = self._blocking(s, t, level, limit - total)
            if pushed == 0:
                break
            total += pushed
        return total

    def residual_reach(self, s: int) -> set[int]:
        """Nodes reachable from `s` along arcs with positive residual capacity."""
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for a in self.adj[u]:
                v = self.head[a]
                if self.cap[a] > 0 and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    def cut_arcs(self, side: set[int]) -> list[int]:
        """Arcs with original capacity leaving `side`, in insertion order."""
        out = []
        for a in range(len(self.head)):
            if self.orig[a] > 0 and self.head[a ^ 1] in side and self.head[a] not in side:
                out.append(a)
        return out

    def decompose(self, s: int, t: int) -> list[list[int]]:
        """Split the current flow into s-t arc sequences (cycles are dropped).

        Each returned walk starts with an arc out of `s`; walks may revisit
        nodes and are left for the caller to shorten.
        """
        flow = [self.orig[a] - self.cap[a] for a in range(len(self.head))]
        walks = []
        for first in self.adj[s]:
            while flow[first] > 0:
                walk = [first]
                flow[first] -= 1
                flow[first ^ 1] += 1
                u = self.head[first]
                while u != t:
                    for a in self.adj[u]:
                        if flow[a] > 0:
                            break
                    else:  # pragma: no cover - flow conservation guarantees an exit
                        raise RuntimeError("flow conservation violated")
                    flow[a] -= 1
                    flow[a ^ 1] += 1
                    walk.append(a)
                    u = self.head[a]
                walks.append(walk)
        return walks
