"""Small integer max-flow solver (Edmonds-Karp).

Capacities are Python ints, so flows are exact; graphs in this package have
at most a few dozen nodes.  Adjacency order is insertion order and BFS is
deterministic, so the maximum flow found is reproducible.
"""

from __future__ import annotations

from collections import deque


class FlowNetwork:
    def __init__(self) -> None:
        self._adj: list[list[int]] = []
        self._to: list[int] = []
        self._cap: list[int] = []
        self._orig: list[int] = []

    def add_node(self) -> int:
        self._adj.append([])
        return len(self._adj) - 1

    def add_edge(self, u: int, v: int, cap: int) -> int:
        """Add a directed edge and its residual twin; returns the edge id."""
        if cap < 0:
            raise ValueError("capacity must be non-negative")
        edge_id = len(self._to)
        self._to.append(v)
        self._cap.append(cap)
        self._orig.append(cap)
        self._adj[u].append(edge_id)
        self._to.append(u)
        self._cap.append(0)
        self._orig.append(0)
        self._adj[v].append(edge_id + 1)
        return edge_id

    def flow_on(self, edge_id: int) -> int:
        return self._orig[edge_id] - self._cap[edge_id]

    def max_flow(self, source: int, sink: int) -> int:
        total = 0
        while True:
            parent_edge = [-1] * len(self._adj)
            parent_edge[source] = -2
            queue = deque([source])
            while queue and parent_edge[sink] == -1:
                u = queue.popleft()
                for edge_id in self._adj[u]:
                    v = self._to[edge_id]
                    if self._cap[edge_id] > 0 and parent_edge[v] == -1:
                        parent_edge[v] = edge_id
                        queue.append(v)
            if parent_edge[sink] == -1:
                return total
            bottleneck = None
            v = sink
            while v != source:
                edge_id = parent_edge[v]
                residual = self._cap[edge_id]
                bottleneck = residual if bottleneck is None else min(bottleneck, residual)
                v = self._to[edge_id ^ 1]
            v = sink
            while v != source:
                edge_id = parent_edge[v]
                self._cap[edge_id] -= bottleneck
                self._cap[edge_id ^ 1] += bottleneck
                v = self._to[edge_id ^ 1]
            total += bottleneck
