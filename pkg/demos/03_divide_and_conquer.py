"""Refine coarse clusters with the two child-session strategies.

Divide: when the picture is too crowded to see a split, re-embed one
component from the tree-distance submatrix it already has.  Conquer: when
the kernel width itself is wrong for a component, rebuild the component from
its raw points with a new sigma; a salient long edge then appears where the
coarse run showed nothing.

Run:  python3 demos/03_divide_and_conquer.py
"""

import numpy as np

from treecut import ConstraintSet, Dataset, create_session, cut_longest_edges, error_rate, merge_results


def blobs(centers, n_each, spread, seed):
    rng = np.random.default_rng(seed)
    pts = np.vstack([np.asarray(c, float) + spread * rng.standard_normal((n_each, 2)) for c in centers])
    labels = np.repeat(np.arange(len(centers)), n_each)
    return Dataset(points=pts, attr_kind="numeric", labels=labels, name="toy")


# -- divide -------------------------------------------------------------------
# Five true clusters; the two widest gaps dominate, so two cuts leave two
# components that each secretly hold a pair of clusters.

data = blobs([(0, 0), (4, 0), (30, 0), (34, 0), (60, 10)], 30, 0.25, seed=0)
parent = create_session(data, sigma="auto", dim=1)
coarse = cut_longest_edges(parent, 2)
print(f"[divide] after 2 cuts: k={coarse.k}, error={error_rate(coarse, data.labels):.3f}")

for comp in range(coarse.k):
    members = np.flatnonzero(coarse.component_of == comp)
    hidden = len(set(data.labels[members].tolist()))
    if hidden > 1:
        child = parent.divide(comp)
        cut_longest_edges(child, 1)
        print(f"[divide] component {comp} ({len(members)} nodes, {hidden} classes) split in a child session")

merged = merge_results(parent)
print(f"[divide] merged: k={merged.k}, error={error_rate(merged, data.labels):.3f}")

# -- conquer ------------------------------------------------------------------
# With sigma=100 the close pair of clusters stays one component; the sparse
# labels expose it, and rebuilding that component with sigma=1 gives one edge
# that towers over the rest.

data2 = blobs([(0, 0), (3, 0), (30, 0)], 25, 0.3, seed=1)
parent2 = create_session(data2, sigma=100.0, dim=1)
cut_longest_edges(parent2, 1)
parent2.set_constraints(ConstraintSet(labels={0: 0, 25: 1, 50: 2}))
report = parent2.check_constraints()
print(f"[conquer] mixed-label components at sigma=100: {report.mixed_label_components}")

mixed = report.mixed_label_components[0][0]
child2 = parent2.conquer(mixed, new_sigma=1.0)
lens = child2.tree.edge_length[child2.tree.edge_children]
print(f"[conquer] child sigma=1: longest edge {lens.max():.2f} vs median {np.median(lens):.2f}")
cut_longest_edges(child2, 1)

merged2 = merge_results(parent2)
print(f"[conquer] merged: k={merged2.k}, error={error_rate(merged2, data2.labels):.3f}, "
      f"violations empty: {parent2.check_constraints(assignment=merged2).empty}")
