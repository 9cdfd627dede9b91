"""Small integral max-flow: BFS augmenting paths on an arc list.

Vertex-split conventions used by the Moser and Mader reductions: vertex u of
the graph becomes ``u_in = 2u`` and ``u_out = 2u + 1`` joined by a unit arc;
graph edges become unbounded ``u_out -> w_in`` arcs. Auxiliary terminals get
the indices after ``2n``.
"""
from __future__ import annotations

from collections import deque

INF = 1 << 40


def node_in(u: int) -> int:
    return 2 * u


def node_out(u: int) -> int:
    return 2 * u + 1


class FlowNetwork:
    """Residual network with paired forward/backward arcs.

    Arc ``e`` and its reverse ``e ^ 1`` are stored adjacently; ``cap`` holds
    residual capacity, ``flow(e)`` is recovered from the reverse arc.
    """

    def __init__(self, node_count: int):
        self.node_count = node_count
        self.head: list[int] = []
        self.cap: list[int] = []
        self.original: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(node_count)]

    def add_arc(self, u: int, w: int, capacity: int) -> int:
        e = len(self.head)
        self.head += [w, u]
        self.cap += [capacity, 0]
        self.original += [capacity, 0]
        self.adj[u].append(e)
        self.adj[w].append(e + 1)
        return e

    def tail(self, e: int) -> int:
        return self.head[e ^ 1]

    def flow(self, e: int) -> int:
        return self.original[e] - self.cap[e] if e % 2 == 0 else 0

    def arcs(self):
        """Forward arcs as ``(e, u, w, capacity)``."""
        for e in range(0, len(self.head), 2):
            yield e, self.head[e + 1], self.head[e], self.original[e]

    def _augmenting_path(self, s: int, t: int) -> list[int] | None:
        parent = [-1] * self.node_count
        parent[s] = -2
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                w = self.head[e]
                if self.cap[e] > 0 and parent[w] == -1:
                    parent[w] = e
                    if w == t:
                        path = []
                        while w != s:
                            e = parent[w]
                            path.append(e)
                            w = self.head[e ^ 1]
                        return path
                    queue.append(w)
        return None

    def max_flow(self, s: int, t: int, limit: int = INF) -> int:
        total = 0
        while total < limit:
            path = self._augmenting_path(s, t)
            if path is None:
                break
            delta = min(min(self.cap[e] for e in path), limit - total)
            for e in path:
                self.cap[e] -= delta
                self.cap[e ^ 1] += delta
            total += delta
        return total

    def residual_reachable(self, s: int) -> set[int]:
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for e in self.adj[u]:
                w = self.head[e]
                if self.cap[e] > 0 and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    def decompose_paths(self, s: int, t: int) -> list[list[int]]:
        """Split the current s-t flow into unit paths given as node sequences.

        Follows positive-flow arcs from ``s``, lowest arc index first, and
        subtracts each finished path. Flow circulating on a cycle is
        cancelled when the walk closes it, so every path returned is simple.
        """
        remaining = {}
        out_arcs: dict[int, list[int]] = {}
        for e, u, _, _ in self.arcs():
            f = self.flow(e)
            if f > 0:
                remaining[e] = f
                out_arcs.setdefault(u, []).append(e)
        paths = []
        while any(remaining[e] > 0 for e in out_arcs.get(s, ())):
            nodes, taken = [s], []
            u = s
            while u != t:
                e = next(e for e in out_arcs[u] if remaining[e] > 0)
                w = self.head[e]
                if w in nodes:
                    k = nodes.index(w)
                    for c in taken[k:] + [e]:
                        remaining[c] -= 1
                    del nodes[k + 1:]
                    del taken[k:]
                else:
                    nodes.append(w)
                    taken.append(e)
                u = w
            for e in taken:
                remaining[e] -= 1
            paths.append(nodes)
        return paths
