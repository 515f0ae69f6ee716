import numpy as np
import pytest

from treecut.datasets import Dataset


def make_blobs(centers, n_each, spread, seed):
    """2-D Gaussian blobs with blob-index labels."""
    rng = np.random.default_rng(seed)
    pts, labs = [], []
    for i, c in enumerate(centers):
        pts.append(np.asarray(c, dtype=float) + spread * rng.standard_normal((n_each, 2)))
        labs.append(np.full(n_each, i, dtype=np.int64))
    return Dataset(points=np.vstack(pts), attr_kind="numeric", labels=np.concatenate(labs), name="blobs")


def random_weighted_tree(rng, n, low=0.1, high=10.0):
    """Random tree as (parents-of-1..n-1, lengths); node 0 is the root."""
    parent = np.array([int(rng.integers(0, i)) for i in range(1, n)], dtype=np.int64)
    length = rng.uniform(low, high, n - 1)
    return parent, length


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
