"""Interactive clustering sessions.

A session owns one embedded in-tree over a subset of a root dataset.  The
user's gestures resolve to tree edges (nearest segment in display space),
cut edges split components, and components can be refined in child sessions:
"divide" re-embeds a component from the existing tree-distance submatrix,
"conquer" rebuilds everything from the raw points with a new kernel width.
Finalized children are merged back into the parent's assignment.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .datasets import Dataset, DistanceMatrix, dataset_fingerprint, distance_matrix
from .errors import (
    ConstraintError,
    DocumentError,
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
from .intree import InTree, Potentials, build_in_tree, compute_potentials, default_sigma, to_undirected
from .mds import Embedding, embed
from .treedist import tree_distances

DOCUMENT_FORMAT = 1


@dataclass(frozen=True)
class ClusterAssignment:
    """Dense component ids per node; ids ordered by smallest contained node."""

    component_of: np.ndarray
    k: int


@dataclass
class ConstraintSet:
    """Pairwise must/cannot-link constraints plus partial semi-supervised labels.

    Node ids live in root-dataset space.  Pairs are normalized to
    (small, large); a pair may not appear in both lists.
    """

    must_link: list[tuple[int, int]] = field(default_factory=list)
    cannot_link: list[tuple[int, int]] = field(default_factory=list)
    labels: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.must_link = [self._norm(p) for p in self.must_link]
        self.cannot_link = [self._norm(p) for p in self.cannot_link]
        dup = set(self.must_link) & set(self.cannot_link)
        if dup:
            raise ConstraintError(f"pairs in both must_link and cannot_link: {sorted(dup)}")
        self.labels = {int(k): int(v) for k, v in self.labels.items()}

    @staticmethod
    def _norm(pair) -> tuple[int, int]:
        a, b = int(pair[0]), int(pair[1])
        if a == b:
            raise ConstraintError(f"constraint pair ({a}, {b}) must name two distinct nodes")
        return (a, b) if a < b else (b, a)

    def node_ids(self) -> set[int]:
        ids = {a for a, _ in self.must_link} | {b for _, b in self.must_link}
        ids |= {a for a, _ in self.cannot_link} | {b for _, b in self.cannot_link}
        ids |= set(self.labels)
        return ids

    def copy(self) -> "ConstraintSet":
        return ConstraintSet(list(self.must_link), list(self.cannot_link), dict(self.labels))


@dataclass(frozen=True)
class ViolationReport:
    must_link: list[tuple[int, int]]
    cannot_link: list[tuple[int, int]]
    mixed_label_components: list[tuple[int, tuple[int, ...]]]

    @property
    def empty(self) -> bool:
        return not (self.must_link or self.cannot_link or self.mixed_label_components)


@dataclass
class ChildLink:
    component: int  # component id at creation time (display metadata)
    kind: str  # "divide" | "conquer"
    session_id: str
    session: "Session | None" = None


def components_from_cuts(parent: np.ndarray, cuts: set[int]) -> ClusterAssignment:
    """Connected components of the tree minus cut edges, via union-find."""
    n = len(parent)
    root = list(range(n))

    def find(x: int) -> int:
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    for child in range(n):
        p = parent[child]
        if p >= 0 and child not in cuts:
            ra, rb = find(child), find(int(p))
            if ra != rb:
                root[ra] = rb
    ids: dict[int, int] = {}
    comp = np.empty(n, dtype=np.int64)
    for i in range(n):  # ascending scan numbers components by smallest member
        r = find(i)
        comp[i] = ids.setdefault(r, len(ids))
    return ClusterAssignment(component_of=comp, k=len(ids))


def _session_id(dataset_ref: str, kind: str, parent_id: str, node_ids: np.ndarray, sigma: float, metric: str, dim: int, method: str) -> str:
    h = hashlib.sha256()
    for part in (dataset_ref, kind, parent_id, repr(float(sigma)), metric, str(dim), method):
        h.update(part.encode())
        h.update(b"\x1f")
    h.update(np.ascontiguousarray(node_ids, dtype=np.int64).tobytes())
    return "s" + h.hexdigest()[:15]


def _pipeline(D: DistanceMatrix, sigma: float, dim: int, method: str) -> tuple[Potentials, InTree, np.ndarray, Embedding]:
    pot = compute_potentials(D, sigma)
    tree = build_in_tree(D, pot)
    dist = tree_distances(to_undirected(tree))
    embedding = embed(dist, pot, dim, method)
    return pot, tree, dist, embedding


@dataclass
class Session:
    """One interactive clustering state over a node subset of a root dataset."""

    id: str
    dataset: Dataset
    dataset_ref: str
    kind: str
    parent_id: str
    node_ids: np.ndarray  # root-dataset ids, ascending
    sigma: float
    metric: str
    dim: int
    method: str
    tree: InTree
    dist: np.ndarray
    embedding: Embedding
    cuts: set[int] = field(default_factory=set)
    offsets: dict[int, np.ndarray] = field(default_factory=dict)  # rep node -> (dim,)
    children: list[ChildLink] = field(default_factory=list)
    constraints: ConstraintSet = field(default_factory=ConstraintSet)

    @property
    def n(self) -> int:
        return len(self.node_ids)

    # ---- clustering state ----

    def components(self) -> ClusterAssignment:
        return components_from_cuts(self.tree.parent, self.cuts)

    def _check_edge(self, e: int) -> None:
        if not 0 <= e < self.n or self.tree.parent[e] < 0:
            raise UnknownEdgeError(f"no edge with id {e}")

    def cut_edge(self, e: int) -> ClusterAssignment:
        e = int(e)
        self._check_edge(e)
        if e in self.cuts:
            raise EdgeAlreadyCutError(f"edge {e} already cut")
        self.cuts.add(e)
        self._prune_offsets()
        return self.components()

    def restore_edge(self, e: int) -> ClusterAssignment:
        e = int(e)
        self._check_edge(e)
        if e not in self.cuts:
            raise EdgeNotCutError(f"edge {e} is not cut")
        self.cuts.remove(e)
        self._prune_offsets()
        return self.components()

    def _component_reps(self, assign: ClusterAssignment | None = None) -> np.ndarray:
        assign = assign or self.components()
        _, first = np.unique(assign.component_of, return_index=True)
        return first  # ascending scan => first occurrence is the smallest node

    def _prune_offsets(self) -> None:
        reps = set(self._component_reps().tolist())
        for key in [k for k in self.offsets if k not in reps]:
            del self.offsets[key]

    # ---- display geometry ----

    def display_positions(self, include_potential_axis: bool = True) -> np.ndarray:
        """Per-node display coordinates: R coords plus component offset,
        optionally augmented with the potential axis."""
        assign = self.components()
        reps = self._component_reps(assign)
        pos = self.embedding.coords.copy()
        for c in range(assign.k):
            off = self.offsets.get(int(reps[c]))
            if off is not None:
                pos[assign.component_of == c] += off
        if include_potential_axis:
            pos = np.column_stack([pos, self.embedding.potential_axis])
        return pos

    def nearest_edge(self, click, include_potential_axis: bool = True) -> int:
        """Uncut edge whose display segment is closest to the click point."""
        click = np.asarray(click, dtype=np.float64)
        want = self.dim + 1 if include_potential_axis else self.dim
        if click.shape != (want,):
            raise InvalidParameterError(f"click must have {want} coordinates, got shape {click.shape}")
        cand = np.array([e for e in self.tree.edge_children if e not in self.cuts], dtype=np.int64)
        if cand.size == 0:
            raise NoUncutEdgesError("no uncut edges remain")
        pos = self.display_positions(include_potential_axis)
        a = pos[cand]
        b = pos[self.tree.parent[cand]]
        ab = b - a
        denom = (ab * ab).sum(axis=1)
        t = ((click[None, :] - a) * ab).sum(axis=1) / np.where(denom > 0, denom, 1.0)
        t = np.clip(np.where(denom > 0, t, 0.0), 0.0, 1.0)
        proj = a + t[:, None] * ab
        d2 = ((proj - click[None, :]) ** 2).sum(axis=1)
        return int(cand[np.argmin(d2)])  # first minimum = smallest edge id

    def set_component_offset(self, c: int, delta) -> None:
        """Shift one component's display position; assignments are unaffected."""
        assign = self.components()
        if not 0 <= c < assign.k:
            raise UnknownComponentError(f"component {c} does not exist (k={assign.k})")
        delta = np.asarray(delta, dtype=np.float64)
        if delta.shape != (self.dim,):
            raise InvalidParameterError(f"offset must have {self.dim} coordinates")
        rep = int(self._component_reps(assign)[c])
        self.offsets[rep] = delta

    # ---- refinement ----

    def _component_nodes(self, c: int) -> np.ndarray:
        assign = self.components()
        if not 0 <= c < assign.k:
            raise UnknownComponentError(f"component {c} does not exist (k={assign.k})")
        return np.flatnonzero(assign.component_of == c)

    def _child_tree(self, local: np.ndarray) -> InTree:
        pos = {int(old): new for new, old in enumerate(local)}
        parent = np.full(len(local), -1, dtype=np.int64)
        length = np.zeros(len(local), dtype=np.float64)
        for new, old in enumerate(local):
            old = int(old)
            p = int(self.tree.parent[old])
            if p >= 0 and old not in self.cuts:
                parent[new] = pos[p]
                length[new] = self.tree.edge_length[old]
        root = int(np.flatnonzero(parent < 0)[0])
        pot = Potentials(values=self.tree.potentials.values[local].copy(), sigma=self.sigma)
        return InTree(parent=parent, edge_length=length, root=root, potentials=pot)

    def divide(self, c: int) -> "Session":
        """Re-embed one component from the existing tree-distance submatrix.

        The component's induced subtree and its potentials are inherited;
        only the embedding is recomputed.
        """
        local = self._component_nodes(c)
        if len(local) < 2:
            raise SingletonComponentError(f"component {c} has a single node")
        tree = self._child_tree(local)
        dist = self.dist[np.ix_(local, local)].copy()
        embedding = embed(dist, tree.potentials, self.dim, self.method)
        node_ids = self.node_ids[local].copy()
        child = Session(
            id=_session_id(self.dataset_ref, "divide", self.id, node_ids, self.sigma, self.metric, self.dim, self.method),
            dataset=self.dataset,
            dataset_ref=self.dataset_ref,
            kind="divide",
            parent_id=self.id,
            node_ids=node_ids,
            sigma=self.sigma,
            metric=self.metric,
            dim=self.dim,
            method=self.method,
            tree=tree,
            dist=dist,
            embedding=embedding,
            constraints=self.constraints.copy(),
        )
        self.children.append(ChildLink(component=int(c), kind="divide", session_id=child.id, session=child))
        return child

    def conquer(self, c: int, new_sigma: float) -> "Session":
        """Rebuild one component from its raw points with a new kernel width."""
        if new_sigma <= 0:
            raise InvalidParameterError(f"sigma must be positive, got {new_sigma}")
        local = self._component_nodes(c)
        if len(local) < 2:
            raise SingletonComponentError(f"component {c} has a single node")
        node_ids = self.node_ids[local].copy()
        sub = Dataset(
            points=self.dataset.points[node_ids],
            attr_kind=self.dataset.attr_kind,
            labels=None if self.dataset.labels is None else self.dataset.labels[node_ids],
            name=self.dataset.name,
        )
        D = distance_matrix(sub, self.metric)
        pot, tree, dist, embedding = _pipeline(D, float(new_sigma), self.dim, self.method)
        child = Session(
            id=_session_id(self.dataset_ref, "conquer", self.id, node_ids, float(new_sigma), self.metric, self.dim, self.method),
            dataset=self.dataset,
            dataset_ref=self.dataset_ref,
            kind="conquer",
            parent_id=self.id,
            node_ids=node_ids,
            sigma=float(new_sigma),
            metric=self.metric,
            dim=self.dim,
            method=self.method,
            tree=tree,
            dist=dist,
            embedding=embedding,
            constraints=self.constraints.copy(),
        )
        self.children.append(ChildLink(component=int(c), kind="conquer", session_id=child.id, session=child))
        return child

    # ---- constraints ----

    def set_constraints(self, cs: ConstraintSet) -> None:
        bad = [i for i in cs.node_ids() if not 0 <= i < self.dataset.n]
        if bad:
            raise NodeRangeError(f"constraint nodes out of dataset range: {sorted(bad)}")
        self.constraints = cs

    def check_constraints(self, constraints: ConstraintSet | None = None, assignment: ClusterAssignment | None = None) -> ViolationReport:
        """Report must-link pairs split apart, cannot-link pairs kept together,
        and components mixing several semi-supervised label classes."""
        cs = constraints if constraints is not None else self.constraints
        bad = [i for i in cs.node_ids() if not 0 <= i < self.dataset.n]
        if bad:
            raise NodeRangeError(f"constraint nodes out of dataset range: {sorted(bad)}")
        assign = assignment if assignment is not None else self.components()
        local_of = {int(r): i for i, r in enumerate(self.node_ids)}
        comp = assign.component_of

        def comp_of(root_id: int):
            i = local_of.get(root_id)
            return None if i is None else int(comp[i])

        must = [p for p in cs.must_link if (ca := comp_of(p[0])) is not None and (cb := comp_of(p[1])) is not None and ca != cb]
        cannot = [p for p in cs.cannot_link if (ca := comp_of(p[0])) is not None and (cb := comp_of(p[1])) is not None and ca == cb]
        classes: dict[int, set[int]] = {}
        for node, cls in cs.labels.items():
            c = comp_of(node)
            if c is not None:
                classes.setdefault(c, set()).add(cls)
        mixed = [(c, tuple(sorted(v))) for c, v in sorted(classes.items()) if len(v) > 1]
        return ViolationReport(must_link=must, cannot_link=cannot, mixed_label_components=mixed)


def create_session(
    ds: Dataset,
    sigma: float | str | None = None,
    metric: str | None = None,
    dim: int = 1,
    method: str = "classical",
) -> Session:
    """Run the full pipeline (distances, potentials, in-tree, tree metrics,
    embedding) over a whole dataset and wrap it in a fresh session.

    ``sigma=None`` or ``"auto"`` applies the median-squared-distance default.
    Session ids are content-addressed: identical inputs produce the same id.
    """
    if metric is None:
        metric = "euclidean" if ds.attr_kind == "numeric" else "hamming"
    if not 1 <= dim <= 3:
        raise InvalidParameterError("dim must be 1, 2, or 3")
    D = distance_matrix(ds, metric)
    if sigma is None or sigma == "auto":
        sigma = default_sigma(D)
    sigma = float(sigma)
    if sigma <= 0:
        raise InvalidParameterError(f"sigma must be positive, got {sigma}")
    pot, tree, dist, embedding = _pipeline(D, sigma, dim, method)
    ref = dataset_fingerprint(ds)
    node_ids = np.arange(ds.n, dtype=np.int64)
    return Session(
        id=_session_id(ref, "root", "", node_ids, sigma, metric, dim, method),
        dataset=ds,
        dataset_ref=ref,
        kind="root",
        parent_id="",
        node_ids=node_ids,
        sigma=sigma,
        metric=metric,
        dim=dim,
        method=method,
        tree=tree,
        dist=dist,
        embedding=embedding,
    )


def cut_longest_edges(s: Session, k: int) -> ClusterAssignment:
    """Scripted stand-in for hand-placed crosses: cut the k longest uncut edges."""
    if k < 0:
        raise InvalidParameterError("k must be nonnegative")
    uncut = [int(e) for e in s.tree.edge_children if e not in s.cuts]
    if k > len(uncut):
        raise InvalidParameterError(f"cannot cut {k} edges, only {len(uncut)} remain")
    uncut.sort(key=lambda e: (-s.tree.edge_length[e], e))
    for e in uncut[:k]:
        s.cut_edge(e)
    return s.components()


def merge_results(s: Session, include: set[str] | None = None) -> ClusterAssignment:
    """Assignment over the session's nodes with finalized children merged in.

    A child replaces its component when the child's node set still equals a
    current component exactly; stale children are skipped.  Two children
    matching the same component is an error.  Ids are renumbered densely by
    smallest contained root node id.
    """
    assign = s.components()
    sets = {}
    for c in range(assign.k):
        local = np.flatnonzero(assign.component_of == c)
        sets[frozenset(s.node_ids[local].tolist())] = c
    matched: dict[int, Session] = {}
    for link in s.children:
        if include is not None and link.session_id not in include:
            continue
        child = link.session
        if child is None:
            continue
        c = sets.get(frozenset(child.node_ids.tolist()))
        if c is None:
            continue  # component re-cut since the child was created
        if c in matched:
            raise OverlappingChildrenError(f"components {c} targeted by multiple children")
        matched[c] = child
    local_of = {int(r): i for i, r in enumerate(s.node_ids)}
    groups: list[np.ndarray] = []
    for c in range(assign.k):
        local = np.flatnonzero(assign.component_of == c)
        if c not in matched:
            groups.append(local)
            continue
        child = matched[c]
        sub = merge_results(child, include)
        for g in range(sub.k):
            roots = child.node_ids[np.flatnonzero(sub.component_of == g)]
            groups.append(np.array([local_of[int(r)] for r in roots], dtype=np.int64))
    groups.sort(key=lambda g: int(s.node_ids[g].min()))
    out = np.empty(s.n, dtype=np.int64)
    for idx, g in enumerate(groups):
        out[g] = idx
    return ClusterAssignment(component_of=out, k=len(groups))


def error_rate(assignment: ClusterAssignment, truth: np.ndarray | None) -> float:
    """Fraction of nodes disagreeing with their component's majority class."""
    if truth is None:
        raise MissingLabelsError("ground-truth labels required")
    truth = np.asarray(truth)
    comp = assignment.component_of
    if len(truth) != len(comp):
        raise MissingLabelsError("labels must cover every node")
    agree = 0
    for c in range(assignment.k):
        members = truth[comp == c]
        agree += int(np.bincount(members).max())
    return 1.0 - agree / len(comp)


# ---- session documents ----


def to_document(s: Session) -> dict:
    """Self-describing serializable snapshot of a session (no distance matrix)."""
    children = s.tree.edge_children
    return {
        "format": DOCUMENT_FORMAT,
        "id": s.id,
        "dataset": s.dataset_ref,
        "kind": s.kind,
        "parent": s.parent_id,
        "node_ids": [int(i) for i in s.node_ids],
        "sigma": float(s.sigma),
        "metric": s.metric,
        "dim": int(s.dim),
        "method": s.method,
        "root": int(s.tree.root),
        "edges": [[int(c), int(s.tree.parent[c]), float(s.tree.edge_length[c])] for c in children],
        "potentials": [float(v) for v in s.tree.potentials.values],
        "coords": [[float(x) for x in row] for row in s.embedding.coords],
        "potential_axis": [float(v) for v in s.embedding.potential_axis],
        "stress": float(s.embedding.stress),
        "cuts": sorted(int(e) for e in s.cuts),
        "offsets": [[int(rep), [float(x) for x in off]] for rep, off in sorted(s.offsets.items())],
        "constraints": {
            "must_link": [list(p) for p in sorted(s.constraints.must_link)],
            "cannot_link": [list(p) for p in sorted(s.constraints.cannot_link)],
            "labels": [[int(n), int(c)] for n, c in sorted(s.constraints.labels.items())],
        },
        "children": [{"component": link.component, "session": link.session_id, "kind": link.kind} for link in s.children],
    }


def document_bytes(doc: dict) -> bytes:
    """Canonical byte encoding; identical states serialize identically."""
    return (json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n").encode()


def from_document(doc: dict, dataset: Dataset) -> Session:
    """Rebuild a session from its document and its root dataset.

    Tree distances are recomputed from the stored edges (they are never
    persisted); the embedding is restored as stored.  Child links keep their
    ids but no session objects; the caller rewires them from its own store.
    """
    if doc.get("format") != DOCUMENT_FORMAT:
        raise DocumentError(f"unsupported document format {doc.get('format')!r}")
    ref = dataset_fingerprint(dataset)
    if doc["dataset"] != ref:
        raise DocumentError("document does not belong to this dataset")
    node_ids = np.asarray(doc["node_ids"], dtype=np.int64)
    n = len(node_ids)
    parent = np.full(n, -1, dtype=np.int64)
    length = np.zeros(n, dtype=np.float64)
    for c, p, ln in doc["edges"]:
        parent[int(c)] = int(p)
        length[int(c)] = float(ln)
    pot = Potentials(values=np.asarray(doc["potentials"], dtype=np.float64), sigma=float(doc["sigma"]))
    tree = InTree(parent=parent, edge_length=length, root=int(doc["root"]), potentials=pot)
    dist = tree_distances(to_undirected(tree))
    embedding = Embedding(
        coords=np.asarray(doc["coords"], dtype=np.float64),
        dim=int(doc["dim"]),
        potential_axis=np.asarray(doc["potential_axis"], dtype=np.float64),
        stress=float(doc["stress"]),
    )
    cons = doc.get("constraints", {})
    constraints = ConstraintSet(
        must_link=[tuple(p) for p in cons.get("must_link", [])],
        cannot_link=[tuple(p) for p in cons.get("cannot_link", [])],
        labels={int(k): int(v) for k, v in cons.get("labels", [])},
    )
    sess = Session(
        id=doc["id"],
        dataset=dataset,
        dataset_ref=ref,
        kind=doc["kind"],
        parent_id=doc.get("parent", ""),
        node_ids=node_ids,
        sigma=float(doc["sigma"]),
        metric=doc["metric"],
        dim=int(doc["dim"]),
        method=doc["method"],
        tree=tree,
        dist=dist,
        embedding=embedding,
        cuts=set(int(e) for e in doc["cuts"]),
        offsets={int(rep): np.asarray(off, dtype=np.float64) for rep, off in doc.get("offsets", [])},
        constraints=constraints,
    )
    sess.children = [ChildLink(component=int(ch["component"]), kind=ch["kind"], session_id=ch["session"]) for ch in doc.get("children", [])]
    return sess


def layout_dict(s: Session) -> dict:
    """Display payload consumed by the UI and written by the CLI."""
    assign = s.components()
    doc = to_document(s)
    doc.pop("potentials")
    doc["components"] = {"assignment": [int(c) for c in assign.component_of], "k": assign.k}
    doc["n"] = s.n
    return doc


def assignment_csv(s: Session, assignment: ClusterAssignment | None = None) -> str:
    """CSV export (root node id, component id), merged through children."""
    assign = assignment if assignment is not None else merge_results(s)
    lines = ["node,component"]
    for local, root in enumerate(s.node_ids):
        lines.append(f"{int(root)},{int(assign.component_of[local])}")
    return "\n".join(lines) + "\n"
