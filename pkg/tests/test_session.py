import numpy as np
import pytest
from conftest import make_blobs

from treecut.datasets import Dataset, distance_matrix, generate_gaussian_mixture, generate_spiral
from treecut.errors import (
    ConstraintError,
    EdgeAlreadyCutError,
    EdgeNotCutError,
    InvalidParameterError,
    MissingLabelsError,
    NodeRangeError,
    NoUncutEdgesError,
    OverlappingChildrenError,
    SingletonComponentError,
    UnknownComponentError,
    UnknownEdgeError,
)
from treecut.intree import default_sigma
from treecut.session import (
    ClusterAssignment,
    ConstraintSet,
    create_session,
    cut_longest_edges,
    document_bytes,
    error_rate,
    from_document,
    merge_results,
    to_document,
)


def single_point_dataset():
    return Dataset(points=np.array([[1.0, 2.0]]), attr_kind="numeric")


def oracle_components(parent, cuts):
    """Independent union-find over uncut edges."""
    n = len(parent)
    groups = {i: {i} for i in range(n)}
    owner = list(range(n))
    for child in range(n):
        p = int(parent[child])
        if p < 0 or child in cuts:
            continue
        a, b = owner[child], owner[p]
        if a == b:
            continue
        if len(groups[a]) < len(groups[b]):
            a, b = b, a
        for x in groups[b]:
            owner[x] = a
        groups[a] |= groups.pop(b)
    reps = sorted(groups, key=lambda r: min(groups[r]))
    out = np.empty(n, dtype=int)
    for cid, r in enumerate(reps):
        for x in groups[r]:
            out[x] = cid
    return out, len(reps)


def oracle_nearest_edge(s, click):
    """Exhaustive point-to-segment scan over uncut edges in display space."""
    pos = s.display_positions()
    best, best_d = None, None
    for e in s.tree.edge_children:
        e = int(e)
        if e in s.cuts:
            continue
        a, b = pos[e], pos[int(s.tree.parent[e])]
        ab = b - a
        denom = float(ab @ ab)
        t = 0.0 if denom == 0 else max(0.0, min(1.0, float((click - a) @ ab) / denom))
        d = float(np.linalg.norm(a + t * ab - click))
        if best_d is None or d < best_d - 1e-15:
            best, best_d = e, d
    return best


class TestCreateSession:
    def test_spiral_sigma4(self):
        ds = generate_spiral(300, 3, 0.0, seed=42)
        s = create_session(ds, sigma=4.0, dim=1, method="classical")
        assert s.n == 300
        assert len(s.tree.edge_children) == 299
        assert s.components().k == 1

    def test_single_point(self):
        s = create_session(single_point_dataset(), sigma=1.0)
        assert s.n == 1
        assert len(s.tree.edge_children) == 0
        assert s.components().k == 1

    def test_mixture_long_edges_are_between_classes(self):
        ds = generate_gaussian_mixture(64, 32, 16, 12.0, seed=7)
        s = create_session(ds, sigma="auto", dim=1)
        lens = [(float(s.tree.edge_length[e]), int(e)) for e in s.tree.edge_children]
        lens.sort(reverse=True)
        for _, e in lens[:15]:
            assert ds.labels[e] != ds.labels[int(s.tree.parent[e])]

    def test_content_addressed_id(self):
        ds = generate_spiral(30, 3, 0.0, seed=1)
        a = create_session(ds, sigma=4.0)
        b = create_session(ds, sigma=4.0)
        c = create_session(ds, sigma=5.0)
        assert a.id == b.id
        assert a.id != c.id

    def test_auto_sigma_applied(self):
        ds = generate_spiral(40, 2, 0.0, seed=3)
        s = create_session(ds, sigma="auto")
        assert s.sigma == pytest.approx(default_sigma(distance_matrix(ds, "euclidean")))

    def test_bad_dim(self):
        ds = generate_spiral(10, 2, 0.0, seed=0)
        with pytest.raises(InvalidParameterError):
            create_session(ds, sigma=1.0, dim=4)


class TestNearestEdge:
    def _session(self, seed=0, n=40):
        rng = np.random.default_rng(seed)
        ds = Dataset(points=rng.normal(size=(n, 2)), attr_kind="numeric")
        return create_session(ds, sigma="auto", dim=1)

    def test_midpoint_hits_edge(self):
        s = self._session()
        pos = s.display_positions()
        e = int(s.tree.edge_children[5])
        mid = (pos[e] + pos[int(s.tree.parent[e])]) / 2
        assert s.nearest_edge(mid) == e

    def test_single_edge_any_click(self):
        ds = Dataset(points=np.array([[0.0, 0.0], [1.0, 0.0]]), attr_kind="numeric")
        s = create_session(ds, sigma=1.0)
        only = int(s.tree.edge_children[0])
        assert s.nearest_edge(np.array([123.0, -7.0])) == only

    def test_matches_bruteforce_oracle(self):
        s = self._session(seed=3, n=50)
        rng = np.random.default_rng(99)
        cut_longest_edges(s, 3)
        pos = s.display_positions()
        lo, hi = pos.min(axis=0), pos.max(axis=0)
        for _ in range(200):
            click = lo + (hi - lo) * rng.random(2) * 1.2 - 0.1
            assert s.nearest_edge(click) == oracle_nearest_edge(s, click)

    def test_wrong_click_dimension(self):
        s = self._session()
        with pytest.raises(InvalidParameterError):
            s.nearest_edge(np.zeros(5))

    def test_r_only_matching(self):
        s = self._session()
        e = int(s.tree.edge_children[0])
        pos = s.display_positions(include_potential_axis=False)
        mid = (pos[e] + pos[int(s.tree.parent[e])]) / 2
        assert s.nearest_edge(mid, include_potential_axis=False) == e

    def test_all_cut_raises(self):
        ds = Dataset(points=np.array([[0.0, 0.0], [1.0, 0.0]]), attr_kind="numeric")
        s = create_session(ds, sigma=1.0)
        s.cut_edge(int(s.tree.edge_children[0]))
        with pytest.raises(NoUncutEdgesError):
            s.nearest_edge(np.zeros(2))


class TestCutRestore:
    def _chain_session(self):
        ds = Dataset(points=np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]), attr_kind="numeric")
        return create_session(ds, sigma=1.0)

    def test_first_cut_splits_in_two(self):
        s = self._chain_session()
        assert s.components().k == 1
        a = s.cut_edge(0)
        assert a.k == 2

    def test_k_cuts_give_k_plus_one(self):
        rng = np.random.default_rng(0)
        ds = Dataset(points=rng.normal(size=(30, 2)), attr_kind="numeric")
        s = create_session(ds, sigma="auto")
        for i, e in enumerate(s.tree.edge_children[:8]):
            a = s.cut_edge(int(e))
            assert a.k == i + 2

    def test_chain_cut_components(self):
        s = self._chain_session()
        a = s.cut_edge(0)  # edge 0 -> 1
        assert a.component_of.tolist() == [0, 1, 1]

    def test_unknown_and_duplicate(self):
        s = self._chain_session()
        with pytest.raises(UnknownEdgeError):
            s.cut_edge(99)
        with pytest.raises(UnknownEdgeError):
            s.cut_edge(s.tree.root)
        s.cut_edge(0)
        with pytest.raises(EdgeAlreadyCutError):
            s.cut_edge(0)

    def test_restore_inverse(self):
        s = self._chain_session()
        before = s.components()
        s.cut_edge(0)
        after = s.restore_edge(0)
        np.testing.assert_array_equal(before.component_of, after.component_of)
        assert after.k == before.k

    def test_restore_uncut_raises(self):
        s = self._chain_session()
        with pytest.raises(EdgeNotCutError):
            s.restore_edge(0)

    def test_random_walk_state_machine(self):
        rng = np.random.default_rng(7)
        ds = Dataset(points=rng.normal(size=(25, 2)), attr_kind="numeric")
        s = create_session(ds, sigma="auto")
        edges = [int(e) for e in s.tree.edge_children]
        for _ in range(400):
            e = int(rng.choice(edges))
            if e in s.cuts:
                a = s.restore_edge(e)
            else:
                a = s.cut_edge(e)
            assert a.k == len(s.cuts) + 1
            both, _ = oracle_components(s.tree.parent, s.cuts)
            np.testing.assert_array_equal(a.component_of, both)

    def test_components_against_oracle(self):
        rng = np.random.default_rng(11)
        ds = Dataset(points=rng.normal(size=(40, 2)), attr_kind="numeric")
        s = create_session(ds, sigma="auto")
        edges = [int(e) for e in s.tree.edge_children]
        for e in rng.choice(edges, size=10, replace=False):
            s.cut_edge(int(e))
        got = s.components()
        expect, k = oracle_components(s.tree.parent, s.cuts)
        assert got.k == k == 11
        np.testing.assert_array_equal(got.component_of, expect)


class TestOffsets:
    def _two_component_session(self):
        ds = make_blobs([(0, 0), (20, 0)], 15, 0.4, seed=5)
        s = create_session(ds, sigma="auto")
        cut_longest_edges(s, 1)
        return s

    def test_zero_offset_no_change(self):
        s = self._two_component_session()
        before = s.display_positions()
        s.set_component_offset(0, np.zeros(1))
        np.testing.assert_array_equal(s.display_positions(), before)

    def test_offset_shifts_only_one_side(self):
        s = self._two_component_session()
        a = s.components()
        before = s.display_positions()
        s.set_component_offset(1, np.array([5.0]))
        after = s.display_positions()
        moved = a.component_of == 1
        np.testing.assert_allclose(after[moved, 0], before[moved, 0] + 5.0)
        np.testing.assert_array_equal(after[~moved], before[~moved])
        # potential axis untouched
        np.testing.assert_array_equal(after[:, 1], before[:, 1])

    def test_assignment_invariant_under_offsets(self):
        s = self._two_component_session()
        before = s.components()
        s.set_component_offset(0, np.array([-3.0]))
        s.set_component_offset(1, np.array([9.0]))
        after = s.components()
        np.testing.assert_array_equal(before.component_of, after.component_of)

    def test_invalid_component(self):
        s = self._two_component_session()
        with pytest.raises(UnknownComponentError):
            s.set_component_offset(5, np.zeros(1))

    def test_offset_affects_nearest_edge_geometry(self):
        s = self._two_component_session()
        a = s.components()
        # pick an edge inside component 1 and click its midpoint after shifting
        inside = [int(e) for e in s.tree.edge_children if int(e) not in s.cuts and a.component_of[int(e)] == 1]
        e = inside[0]
        s.set_component_offset(1, np.array([50.0]))
        pos = s.display_positions()
        mid = (pos[e] + pos[int(s.tree.parent[e])]) / 2
        assert s.nearest_edge(mid) == e

    def test_cut_restore_preserves_offsets(self):
        s = self._two_component_session()
        s.set_component_offset(1, np.array([4.0]))
        snapshot = {k: v.copy() for k, v in s.offsets.items()}
        extra = [int(e) for e in s.tree.edge_children if int(e) not in s.cuts][0]
        s.cut_edge(extra)
        s.restore_edge(extra)
        assert set(s.offsets) == set(snapshot)
        for k in snapshot:
            np.testing.assert_array_equal(s.offsets[k], snapshot[k])


class TestDivideConquer:
    def test_divide_whole_reembeds(self):
        ds = make_blobs([(0, 0), (8, 0)], 10, 0.3, seed=2)
        s = create_session(ds, sigma="auto")
        child = s.divide(0)
        assert child.n == s.n
        np.testing.assert_array_equal(child.node_ids, s.node_ids)
        np.testing.assert_array_equal(child.dist, s.dist)

    def test_divide_dist_is_exact_submatrix(self):
        ds = make_blobs([(0, 0), (12, 0), (30, 5)], 12, 0.3, seed=4)
        s = create_session(ds, sigma="auto")
        cut_longest_edges(s, 2)
        a = s.components()
        for c in range(a.k):
            local = np.flatnonzero(a.component_of == c)
            child = s.divide(c)
            assert child.n == len(local)
            np.testing.assert_array_equal(child.dist, s.dist[np.ix_(local, local)])
            # stored subtree distances agree with recomputation from the subtree
            from treecut.intree import to_undirected
            from treecut.treedist import tree_distances

            np.testing.assert_allclose(tree_distances(to_undirected(child.tree)), child.dist, atol=1e-9)

    def test_divide_singleton_rejected(self):
        ds = make_blobs([(0, 0)], 3, 0.2, seed=1)
        s = create_session(ds, sigma="auto")
        s.cut_edge(int(s.tree.edge_children[0]))
        a = s.components()
        singleton = [c for c in range(a.k) if (a.component_of == c).sum() == 1]
        with pytest.raises(SingletonComponentError):
            s.divide(singleton[0])

    def test_conquer_same_sigma_reproduces_topology(self):
        ds = make_blobs([(0, 0), (10, 0)], 12, 0.4, seed=6)
        s = create_session(ds, sigma=3.0)
        child = s.conquer(0, 3.0)
        np.testing.assert_array_equal(child.tree.parent, s.tree.parent)
        np.testing.assert_array_equal(child.tree.edge_length, s.tree.edge_length)
        assert child.tree.root == s.tree.root

    def test_conquer_bad_sigma(self):
        ds = make_blobs([(0, 0)], 5, 0.2, seed=0)
        s = create_session(ds, sigma=1.0)
        with pytest.raises(InvalidParameterError):
            s.conquer(0, -1.0)

    def test_conquer_pure_blob_has_no_salient_edge(self):
        # frozen instance: both post-cut components are single blobs and the
        # rebuilt trees keep every edge under 3x the median edge length
        rng = np.random.default_rng(16)
        pts = np.vstack([rng.standard_normal((50, 2)), [30.0, 0.0] + rng.standard_normal((50, 2))])
        ds = Dataset(points=pts, attr_kind="numeric", labels=np.repeat([0, 1], 50))
        s = create_session(ds, sigma="auto", dim=1)
        a = cut_longest_edges(s, 1)
        assert a.k == 2
        for c in range(2):
            local = np.flatnonzero(a.component_of == c)
            assert len(set(ds.labels[local].tolist())) == 1
            sub = Dataset(points=pts[local], attr_kind="numeric")
            child = s.conquer(c, default_sigma(distance_matrix(sub, "euclidean")))
            lens = child.tree.edge_length[child.tree.edge_children]
            assert lens.max() <= 3.0 * np.median(lens)


class TestConstraints:
    def _session(self):
        ds = make_blobs([(0, 0), (10, 0)], 5, 0.2, seed=3)
        return create_session(ds, sigma="auto")

    def test_empty_report(self):
        s = self._session()
        assert s.check_constraints().empty

    def test_split_must_link_flagged(self):
        # blobs of 5: nodes 0-4 and 5-9; one cut separates them
        s = self._session()
        cut_longest_edges(s, 1)
        s.set_constraints(ConstraintSet(must_link=[(0, 3)]))
        assert s.check_constraints().must_link == []  # same blob, intact
        s.set_constraints(ConstraintSet(must_link=[(0, 7)]))
        assert s.check_constraints().must_link == [(0, 7)]  # straddles the cut

    def test_cross_blob_constraints(self):
        ds = make_blobs([(0, 0), (10, 0)], 5, 0.2, seed=3)
        s = create_session(ds, sigma="auto")
        cut_longest_edges(s, 1)
        s.set_constraints(ConstraintSet(must_link=[(0, 8)], cannot_link=[(0, 1)]))
        rep = s.check_constraints()
        assert rep.must_link == [(0, 8)]  # nodes 0 and 8 are different blobs
        assert rep.cannot_link == [(0, 1)]  # same blob stays together

    def test_mixed_label_component(self):
        s = self._session()  # single component holds both blobs
        s.set_constraints(ConstraintSet(labels={0: 0, 9: 1}))
        rep = s.check_constraints()
        assert rep.mixed_label_components == [(0, (0, 1))]

    def test_pair_in_both_lists_rejected(self):
        with pytest.raises(ConstraintError):
            ConstraintSet(must_link=[(1, 2)], cannot_link=[(2, 1)])

    def test_unknown_node_rejected(self):
        s = self._session()
        with pytest.raises(NodeRangeError):
            s.set_constraints(ConstraintSet(must_link=[(0, 999)]))


class TestMergeAndErrorRate:
    def test_no_children_identity(self):
        ds = make_blobs([(0, 0), (10, 0)], 6, 0.3, seed=1)
        s = create_session(ds, sigma="auto")
        cut_longest_edges(s, 1)
        merged = merge_results(s)
        np.testing.assert_array_equal(merged.component_of, s.components().component_of)

    def test_child_split_increases_k(self):
        ds = make_blobs([(0, 0), (4, 0), (40, 0)], 8, 0.25, seed=2)
        s = create_session(ds, sigma="auto")
        cut_longest_edges(s, 1)  # separates the far blob
        assert s.components().k == 2
        pair_comp = int(s.components().component_of[0])
        child = s.divide(pair_comp)
        cut_longest_edges(child, 1)
        merged = merge_results(s)
        assert merged.k == 3
        assert error_rate(merged, ds.labels) == 0.0

    def test_overlapping_children_rejected(self):
        ds = make_blobs([(0, 0), (10, 0)], 6, 0.3, seed=5)
        s = create_session(ds, sigma="auto")
        s.divide(0)
        s.divide(0)
        with pytest.raises(OverlappingChildrenError):
            merge_results(s)

    def test_stale_child_skipped(self):
        ds = make_blobs([(0, 0), (10, 0)], 6, 0.3, seed=5)
        s = create_session(ds, sigma="auto")
        s.divide(0)  # snapshot of the uncut whole
        cut_longest_edges(s, 1)  # invalidates the child's node set
        merged = merge_results(s)
        assert merged.k == 2

    def test_error_rate_exact_partition(self):
        truth = np.array([0, 0, 1, 1, 2])
        a = ClusterAssignment(component_of=np.array([0, 0, 1, 1, 2]), k=3)
        assert error_rate(a, truth) == 0.0

    def test_error_rate_hand_count(self):
        # components {6 of A} and {3 of B + 1 of A} -> 1 wrong of 10
        truth = np.array([0] * 6 + [1, 1, 1, 0])
        a = ClusterAssignment(component_of=np.array([0] * 6 + [1] * 4), k=2)
        assert error_rate(a, truth) == pytest.approx(0.1)

    def test_error_rate_requires_labels(self):
        a = ClusterAssignment(component_of=np.zeros(3, dtype=int), k=1)
        with pytest.raises(MissingLabelsError):
            error_rate(a, None)


class TestScenarioDivide:
    """Three coarse components, two of which hide a pair of true clusters."""

    def test_full_flow(self):
        ds = make_blobs([(0, 0), (4, 0), (30, 0), (34, 0), (60, 10)], 30, 0.25, seed=0)
        s = create_session(ds, sigma="auto", dim=1)
        a = cut_longest_edges(s, 2)
        assert a.k == 3
        comp_classes = [sorted(set(ds.labels[np.flatnonzero(a.component_of == c)].tolist())) for c in range(3)]
        assert sorted(map(tuple, comp_classes)) == [(0, 1), (2, 3), (4,)]
        for c in range(3):
            if len(comp_classes[c]) == 2:
                child = s.divide(c)
                cut_longest_edges(child, 1)
        merged = merge_results(s)
        assert merged.k == 5
        assert error_rate(merged, ds.labels) == 0.0
        cs = ConstraintSet(
            must_link=[(0, 10), (30, 40), (60, 70), (90, 100), (120, 130)],
            cannot_link=[(0, 30), (30, 60), (60, 90), (90, 120)],
            labels={0: 0, 30: 1, 60: 2, 90: 3, 120: 4},
        )
        s.set_constraints(cs)
        assert s.check_constraints(assignment=merged).empty


class TestScenarioConquer:
    """A coarse sigma leaves two labeled classes merged; a local sigma on the
    conquered component exposes a salient edge that separates them."""

    def test_full_flow(self):
        ds = make_blobs([(0, 0), (3, 0), (30, 0)], 25, 0.3, seed=1)
        s = create_session(ds, sigma=100.0, dim=1)
        cut_longest_edges(s, 1)
        s.set_constraints(ConstraintSet(labels={0: 0, 25: 1, 50: 2}))
        rep = s.check_constraints()
        assert len(rep.mixed_label_components) == 1
        mixed_comp = rep.mixed_label_components[0][0]
        child = s.conquer(mixed_comp, 1.0)
        lens = child.tree.edge_length[child.tree.edge_children]
        assert lens.max() > 3.0 * np.median(lens)  # salient undesired edge
        cut_longest_edges(child, 1)
        merged = merge_results(s)
        assert merged.k == 3
        assert error_rate(merged, ds.labels) == 0.0
        assert s.check_constraints(assignment=merged).empty


class TestDocuments:
    def _session_with_state(self):
        ds = make_blobs([(0, 0), (15, 0)], 8, 0.3, seed=9)
        s = create_session(ds, sigma="auto", dim=1)
        cut_longest_edges(s, 1)
        s.set_component_offset(1, np.array([2.5]))
        s.set_constraints(ConstraintSet(must_link=[(0, 1)], cannot_link=[(0, 8)], labels={0: 0, 8: 1}))
        return ds, s

    def test_round_trip(self):
        ds, s = self._session_with_state()
        doc = to_document(s)
        blob = document_bytes(doc)
        import json

        restored = from_document(json.loads(blob.decode()), ds)
        assert document_bytes(to_document(restored)) == blob
        np.testing.assert_array_equal(restored.components().component_of, s.components().component_of)
        np.testing.assert_allclose(restored.dist, s.dist, atol=1e-9)

    def test_document_bytes_deterministic(self):
        ds, s = self._session_with_state()
        assert document_bytes(to_document(s)) == document_bytes(to_document(s))

    def test_wrong_dataset_rejected(self):
        from treecut.errors import DocumentError

        ds, s = self._session_with_state()
        other = make_blobs([(0, 0)], 4, 0.1, seed=1)
        with pytest.raises(DocumentError):
            from_document(to_document(s), other)

    def test_spiral_cross_cut_matches_arm_labels(self):
        ds = generate_spiral(300, 3, 0.0, seed=42)
        s = create_session(ds, sigma=4.0, dim=1)
        # place crosses at the midpoints of the two longest display segments
        pos = s.display_positions()
        edges = sorted((float(s.tree.edge_length[e]), int(e)) for e in s.tree.edge_children)
        for _, e in edges[-2:]:
            mid = (pos[e] + pos[int(s.tree.parent[e])]) / 2
            hit = s.nearest_edge(mid)
            assert hit == e
            s.cut_edge(hit)
        a = s.components()
        assert a.k == 3
        assert error_rate(a, ds.labels) == 0.0
