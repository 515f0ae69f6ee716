"""Shortest-path metrics on an undirected weighted tree.

A tree has a unique path between any two nodes, so the full N-by-N distance
matrix can be filled by one sweep in breadth-first order: each newly placed
node copies its parent's distance row and adds the connecting edge length.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import InvalidTreeError, NodeRangeError


@dataclass(frozen=True)
class WeightedTree:
    """Undirected tree over n nodes: N-1 edges (u[i], v[i]) with lengths."""

    n: int
    u: np.ndarray
    v: np.ndarray
    length: np.ndarray

    def __post_init__(self):
        if not (len(self.u) == len(self.v) == len(self.length) == self.n - 1):
            raise InvalidTreeError(f"tree over {self.n} nodes needs exactly {self.n - 1} edges")
        if self.n > 1:
            ids = np.concatenate([self.u, self.v])
            if ids.min() < 0 or ids.max() >= self.n:
                raise InvalidTreeError("edge endpoint out of range")
        if np.any(self.length < 0) or not np.all(np.isfinite(self.length)):
            raise InvalidTreeError("edge lengths must be finite and nonnegative")
        # n-1 edges + connectivity implies acyclicity; union-find check
        root = np.arange(self.n)

        def find(x: int) -> int:
            while root[x] != x:
                root[x] = root[root[x]]
                x = root[x]
            return x

        for a, b in zip(self.u, self.v):
            ra, rb = find(int(a)), find(int(b))
            if ra == rb:
                raise InvalidTreeError("edge set contains a cycle")
            root[ra] = rb


def _adjacency(t: WeightedTree) -> list[list[tuple[int, float]]]:
    adj: list[list[tuple[int, float]]] = [[] for _ in range(t.n)]
    for a, b, w in zip(t.u, t.v, t.length):
        adj[int(a)].append((int(b), float(w)))
        adj[int(b)].append((int(a), float(w)))
    return adj


def _bfs_order(t: WeightedTree, start: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Visit order from ``start`` plus each node's BFS parent and edge length."""
    adj = _adjacency(t)
    order = np.empty(t.n, dtype=np.int64)
    parent = np.full(t.n, -1, dtype=np.int64)
    plen = np.zeros(t.n, dtype=np.float64)
    seen = np.zeros(t.n, dtype=bool)
    seen[start] = True
    queue = deque([start])
    k = 0
    while queue:
        node = queue.popleft()
        order[k] = node
        k += 1
        for nbr, w in adj[node]:
            if not seen[nbr]:
                seen[nbr] = True
                parent[nbr] = node
                plen[nbr] = w
                queue.append(nbr)
    if k != t.n:
        raise InvalidTreeError("tree is not connected")
    return order, parent, plen


def tree_distances(t: WeightedTree) -> np.ndarray:
    """All-pairs path lengths; symmetric with a zero diagonal.

    Nodes are relabeled into BFS order so each new row extends its parent's
    row over a contiguous prefix, then the result is permuted back.
    """
    n = t.n
    if n == 1:
        return np.zeros((1, 1), dtype=np.float64)
    order, parent, plen = _bfs_order(t, 0)
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    dist = np.zeros((n, n), dtype=np.float64)
    for k in range(1, n):
        p = pos[parent[order[k]]]
        row = dist[p, :k] + plen[order[k]]
        dist[k, :k] = row
        dist[:k, k] = row
    return dist[np.ix_(pos, pos)]


def path(t: WeightedTree, i: int, j: int) -> list[int]:
    """The unique simple path from i to j, inclusive of both endpoints."""
    for node in (i, j):
        if not 0 <= node < t.n:
            raise NodeRangeError(f"node {node} out of range for n={t.n}")
    if i == j:
        return [i]
    _, parent, _ = _bfs_order(t, i)
    seq = [j]
    while seq[-1] != i:
        nxt = int(parent[seq[-1]])
        if nxt < 0:
            raise InvalidTreeError("endpoints are not connected")
        seq.append(nxt)
    seq.reverse()
    return seq
