"""Node potentials and nearest-descent in-tree construction.

Each point gets a potential ``p_i = -sum_j exp(-d(i,j)^2 / sigma)``; lower
potential marks denser regions.  Every node then descends to its nearest
strictly-lower-potential node, which yields a directed tree (an in-tree) with
exactly N-1 edges, rooted at the potential minimum.

Ties in potential are resolved by the total order (potential, node index);
ties in the descent argmin go to the smallest node index.  Both rules make
construction deterministic even with duplicate points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datasets import DistanceMatrix
from .errors import InvalidParameterError, NodeRangeError
from .treedist import WeightedTree

_BLOCK = 256  # row block for O(N^2) scans; bounds temporary memory


@dataclass(frozen=True)
class Potentials:
    """Per-node potential values together with the kernel width used."""

    values: np.ndarray
    sigma: float

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class InTree:
    """Directed tree: every non-root node points to its descent target.

    ``parent[i]`` is -1 exactly at the root; ``edge_length[i]`` is the
    distance d(i, parent[i]) and 0.0 in the unused root slot.  Edge identity
    is the child node index.
    """

    parent: np.ndarray
    edge_length: np.ndarray
    root: int
    potentials: Potentials

    @property
    def n(self) -> int:
        return len(self.parent)

    @property
    def edge_children(self) -> np.ndarray:
        """Child node index of every edge, ascending."""
        return np.flatnonzero(self.parent >= 0)


def compute_potentials(D: DistanceMatrix, sigma: float) -> Potentials:
    """Evaluate p_i = -sum_j exp(-D[i,j]^2 / sigma), including the j = i term."""
    if sigma <= 0:
        raise InvalidParameterError(f"sigma must be positive, got {sigma}")
    V = D.values
    n = V.shape[0]
    p = np.empty(n, dtype=np.float64)
    for start in range(0, n, _BLOCK):
        stop = min(start + _BLOCK, n)
        block = V[start:stop]
        p[start:stop] = -np.exp(-(block * block) / sigma).sum(axis=1)
    return Potentials(values=p, sigma=float(sigma))


def potential_rank(values: np.ndarray) -> np.ndarray:
    """Dense ranks under the total order (potential, node index)."""
    n = len(values)
    order = np.lexsort((np.arange(n), values))
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    return rank


def build_in_tree(D: DistanceMatrix, P: Potentials) -> InTree:
    """Attach every node to its nearest lower-ranked node.

    The candidate set of node i is every node of strictly lower tie-broken
    rank; the parent is the candidate at minimum distance, smallest index
    first on distance ties.  The rank-0 node becomes the root.
    """
    V = D.values
    n = V.shape[0]
    if P.n != n:
        raise InvalidParameterError("distance matrix and potentials disagree on N")
    rank = potential_rank(P.values)
    parent = np.full(n, -1, dtype=np.int64)
    length = np.zeros(n, dtype=np.float64)
    for start in range(0, n, _BLOCK):
        stop = min(start + _BLOCK, n)
        masked = np.where(rank[None, :] < rank[start:stop, None], V[start:stop], np.inf)
        best = np.argmin(masked, axis=1)  # first minimum = smallest index
        parent[start:stop] = best
        length[start:stop] = masked[np.arange(stop - start), best]
    root = int(np.flatnonzero(rank == 0)[0])
    parent[root] = -1
    length[root] = 0.0
    return InTree(parent=parent, edge_length=length, root=root, potentials=P)


def to_undirected(t: InTree) -> WeightedTree:
    """Drop edge directions, keeping the same N-1 weighted edges."""
    children = t.edge_children
    return WeightedTree(
        n=t.n,
        u=children.copy(),
        v=t.parent[children].copy(),
        length=t.edge_length[children].copy(),
    )


def reroot(t: InTree, new_root: int) -> InTree:
    """Flip the edges on the path from ``new_root`` to the current root.

    The undirected edge multiset is unchanged; afterwards every parent chain
    leads to ``new_root``.  Potentials are carried over untouched, so the
    descent property need not hold on the flipped path.
    """
    if not 0 <= new_root < t.n:
        raise NodeRangeError(f"node {new_root} out of range for n={t.n}")
    if new_root == t.root:
        return t
    parent = t.parent.copy()
    length = t.edge_length.copy()
    node = new_root
    prev_parent = parent[node]
    prev_length = length[node]
    parent[node] = -1
    length[node] = 0.0
    while prev_parent >= 0:
        nxt_parent = parent[prev_parent]
        nxt_length = length[prev_parent]
        parent[prev_parent] = node
        length[prev_parent] = prev_length
        node = prev_parent
        prev_parent, prev_length = nxt_parent, nxt_length
    return InTree(parent=parent, edge_length=length, root=new_root, potentials=t.potentials)


def default_sigma(D: DistanceMatrix) -> float:
    """Scale-aware kernel width default: square of the median pairwise distance.

    A starting point only; the interactive loop exists to retune sigma.
    Falls back to 1.0 when there are no pairs or all points coincide.
    """
    n = D.n
    if n < 2:
        return 1.0
    flat = np.empty(n * (n - 1) // 2, dtype=np.float64)
    pos = 0
    for i in range(n - 1):
        row = D.values[i, i + 1 :]
        flat[pos : pos + len(row)] = row
        pos += len(row)
    med = float(np.median(flat, overwrite_input=True))
    return med * med if med > 0 else 1.0
