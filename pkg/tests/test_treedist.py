import numpy as np
import pytest
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from treecut.errors import InvalidTreeError, NodeRangeError
from treecut.treedist import WeightedTree, path, tree_distances

from conftest import random_weighted_tree


def tree_from_parents(parent, length):
    n = len(parent) + 1
    return WeightedTree(n=n, u=np.arange(1, n, dtype=np.int64), v=np.asarray(parent), length=np.asarray(length, dtype=float))


def dijkstra_oracle(t: WeightedTree) -> np.ndarray:
    rows = np.concatenate([t.u, t.v])
    cols = np.concatenate([t.v, t.u])
    data = np.concatenate([t.length, t.length])
    g = csr_matrix((data, (rows, cols)), shape=(t.n, t.n))
    return dijkstra(g, directed=False)


class TestWeightedTree:
    def test_wrong_edge_count(self):
        with pytest.raises(InvalidTreeError):
            WeightedTree(n=3, u=np.array([1]), v=np.array([0]), length=np.array([1.0]))

    def test_cycle_rejected(self):
        with pytest.raises(InvalidTreeError):
            WeightedTree(n=3, u=np.array([1, 0]), v=np.array([0, 1]), length=np.array([1.0, 1.0]))

    def test_negative_length_rejected(self):
        with pytest.raises(InvalidTreeError):
            tree_from_parents([0, 0], [1.0, -2.0])


class TestTreeDistances:
    def test_chain(self):
        t = tree_from_parents([0, 1], [1.0, 1.0])  # path 0-1-2
        d = tree_distances(t)
        np.testing.assert_allclose(d, [[0, 1, 2], [1, 0, 1], [2, 1, 0]])

    def test_single_node(self):
        t = WeightedTree(n=1, u=np.array([], dtype=np.int64), v=np.array([], dtype=np.int64), length=np.array([]))
        np.testing.assert_array_equal(tree_distances(t), [[0.0]])

    def test_zero_diagonal_symmetric(self, rng):
        parent, length = random_weighted_tree(rng, 40)
        d = tree_distances(tree_from_parents(parent, length))
        np.testing.assert_array_equal(np.diag(d), np.zeros(40))
        np.testing.assert_array_equal(d, d.T)

    def test_matches_dijkstra_random(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 201))
            t = tree_from_parents(*random_weighted_tree(rng, n))
            assert np.abs(tree_distances(t) - dijkstra_oracle(t)).max() < 1e-12

    def test_additivity_exact_on_integer_weights(self, rng):
        # integer lengths make path sums exactly representable
        parent = np.array([int(rng.integers(0, i)) for i in range(1, 60)])
        length = rng.integers(1, 20, 59).astype(float)
        t = tree_from_parents(parent, length)
        d = tree_distances(t)
        for _ in range(200):
            i, j = rng.integers(0, 60, 2)
            nodes = path(t, int(i), int(j))
            for k in nodes:
                assert d[i, j] == d[i, k] + d[k, j]

    def test_dominates_largest_path_edge(self, rng):
        t = tree_from_parents(*random_weighted_tree(rng, 30))
        d = tree_distances(t)
        lens = dict(zip(zip(t.u.tolist(), t.v.tolist()), t.length.tolist()))
        lens.update({(b, a): w for (a, b), w in lens.items()})
        for _ in range(100):
            i, j = rng.integers(0, 30, 2)
            nodes = path(t, int(i), int(j))
            if len(nodes) < 2:
                continue
            biggest = max(lens[(a, b)] for a, b in zip(nodes, nodes[1:]))
            assert d[i, j] >= biggest - 1e-12


class TestPath:
    def test_self_path(self):
        t = tree_from_parents([0, 1], [1.0, 1.0])
        assert path(t, 1, 1) == [1]

    def test_chain_path(self):
        t = tree_from_parents([0, 1], [1.0, 1.0])
        assert path(t, 0, 2) == [0, 1, 2]

    def test_reversal(self, rng):
        t = tree_from_parents(*random_weighted_tree(rng, 25))
        for _ in range(50):
            i, j = map(int, rng.integers(0, 25, 2))
            assert path(t, i, j) == path(t, j, i)[::-1]

    def test_path_lengths_match_matrix(self, rng):
        t = tree_from_parents(*random_weighted_tree(rng, 30))
        d = tree_distances(t)
        lens = dict(zip(zip(t.u.tolist(), t.v.tolist()), t.length.tolist()))
        lens.update({(b, a): w for (a, b), w in lens.items()})
        for _ in range(100):
            i, j = map(int, rng.integers(0, 30, 2))
            nodes = path(t, i, j)
            total = sum(lens[(a, b)] for a, b in zip(nodes, nodes[1:]))
            assert d[i, j] == pytest.approx(total, abs=1e-12)

    def test_out_of_range(self):
        t = tree_from_parents([0], [1.0])
        with pytest.raises(NodeRangeError):
            path(t, 0, 5)
