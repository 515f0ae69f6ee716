"""Dataset ingestion, synthetic generators, and pairwise distance matrices.

Datasets are rectangular: N rows by d attributes, either all numeric or all
categorical.  Distances are Euclidean for numeric data and Hamming (count of
differing attributes) for categorical data.
"""

from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import DatasetFormatError, InvalidParameterError, MetricMismatchError

NUMERIC = "numeric"
CATEGORICAL = "categorical"
EUCLIDEAN = "euclidean"
HAMMING = "hamming"

# metric -> attribute kind it is defined over
_METRIC_KIND = {EUCLIDEAN: NUMERIC, HAMMING: CATEGORICAL}


@dataclass(frozen=True)
class Dataset:
    """N points with d attributes, optionally carrying ground-truth labels.

    ``points`` is float64 for numeric data and a unicode array for
    categorical data.  ``labels`` are dense integer class ids or None.
    """

    points: np.ndarray
    attr_kind: str
    labels: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        pts = self.points
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DatasetFormatError(f"points must be a nonempty 2-D array, got shape {pts.shape}")
        if self.attr_kind == NUMERIC:
            if not np.issubdtype(pts.dtype, np.floating):
                raise DatasetFormatError("numeric dataset requires a float array")
            if not np.all(np.isfinite(pts)):
                raise DatasetFormatError("numeric attributes must be finite")
        elif self.attr_kind == CATEGORICAL:
            if pts.dtype.kind not in ("U", "S"):
                raise DatasetFormatError("categorical dataset requires a string array")
        else:
            raise DatasetFormatError(f"unknown attr_kind {self.attr_kind!r}")
        if self.labels is not None and len(self.labels) != len(pts):
            raise DatasetFormatError("labels length must match point count")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric nonnegative pairwise distances with a zero diagonal."""

    values: np.ndarray
    metric: str

    @property
    def n(self) -> int:
        return self.values.shape[0]


def parse_csv(text: str, attr_kind: str, label_column: int | None = None, name: str = "") -> Dataset:
    """Parse comma-separated text into a Dataset.

    Parameters
    ----------
    text : str
        UTF-8 CSV content, no header.  Rows must all have the same number
        of columns.
    attr_kind : {"numeric", "categorical"}
        Declared attribute kind; never sniffed.
    label_column : int, optional
        0-based index of a ground-truth class column.  Label tokens are
        mapped to dense integer ids in order of first appearance.
    """
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise DatasetFormatError("empty dataset")
    width = len(rows[0])
    for idx, row in enumerate(rows):
        if len(row) != width:
            raise DatasetFormatError(f"ragged row {idx}: expected {width} columns, got {len(row)}")
    labels = None
    if label_column is not None:
        if not 0 <= label_column < width:
            raise DatasetFormatError(f"label column {label_column} out of range for width {width}")
        if width < 2:
            raise DatasetFormatError("label column leaves no attribute columns")
        seen: dict[str, int] = {}
        labels = np.array([seen.setdefault(row[label_column], len(seen)) for row in rows], dtype=np.int64)
        rows = [[tok for j, tok in enumerate(row) if j != label_column] for row in rows]
    if attr_kind == NUMERIC:
        try:
            points = np.array([[float(tok) for tok in row] for row in rows], dtype=np.float64)
        except ValueError as exc:
            raise DatasetFormatError(f"non-numeric token in numeric dataset: {exc}") from exc
        if not np.all(np.isfinite(points)):
            raise DatasetFormatError("numeric attributes must be finite")
    elif attr_kind == CATEGORICAL:
        points = np.array(rows, dtype=str)
    else:
        raise DatasetFormatError(f"unknown attr_kind {attr_kind!r}")
    return Dataset(points=points, attr_kind=attr_kind, labels=labels, name=name)


def distance_matrix(ds: Dataset, metric: str) -> DistanceMatrix:
    """Compute the full N-by-N pairwise distance matrix of a dataset."""
    if metric not in _METRIC_KIND:
        raise MetricMismatchError(f"unknown metric {metric!r}")
    if _METRIC_KIND[metric] != ds.attr_kind:
        raise MetricMismatchError(f"metric {metric!r} requires {_METRIC_KIND[metric]} attributes, dataset is {ds.attr_kind}")
    if metric == EUCLIDEAN:
        values = squareform(pdist(ds.points, metric="euclidean"))
    else:
        n, d = ds.points.shape
        counts = np.zeros((n, n), dtype=np.uint32)
        for col in range(d):
            c = ds.points[:, col]
            counts += (c[:, None] != c[None, :])
        values = counts.astype(np.float64)
    return DistanceMatrix(values=values, metric=metric)


def generate_gaussian_mixture(n_per_cluster: int, d: int, m: int, separation: float, seed: int) -> Dataset:
    """Sample m unit-variance Gaussian blobs with guaranteed center spacing.

    Centers are drawn isotropically and rescaled so the minimum pairwise
    center distance equals ``separation`` (in units of the within-blob
    standard deviation, which is 1).  Labels carry the blob index.
    """
    if n_per_cluster < 1 or d < 1 or m < 1:
        raise InvalidParameterError("n_per_cluster, d, and m must all be >= 1")
    if separation <= 0:
        raise InvalidParameterError("separation must be positive")
    rng = np.random.default_rng(seed)
    centers = rng.standard_normal((m, d))
    if m > 1:
        gap = pdist(centers).min()
        if gap == 0.0:
            raise InvalidParameterError("degenerate center draw; use a different seed")
        centers *= separation / gap
    labels = np.repeat(np.arange(m, dtype=np.int64), n_per_cluster)
    points = centers[labels] + rng.standard_normal((m * n_per_cluster, d))
    return Dataset(points=points, attr_kind=NUMERIC, labels=labels, name=f"gaussian-mixture-{m}x{n_per_cluster}")


# Spiral geometry: radius sweeps _SPIRAL_R0.._SPIRAL_R1 over _SPIRAL_SPAN radians.
_SPIRAL_R0 = 1.0
_SPIRAL_R1 = 5.0
_SPIRAL_SPAN = 2.5 * np.pi


def generate_spiral(n: int, arms: int, noise: float, seed: int) -> Dataset:
    """Sample a 2-D multi-arm spiral; labels carry the arm index.

    The n points are split as evenly as possible across arms.  Each arm is
    the same outward-sweeping curve rotated by 2*pi*k/arms, sampled uniformly
    in the sweep parameter, plus isotropic Gaussian noise of the given scale.
    """
    if arms < 1 or n < arms:
        raise InvalidParameterError("need n >= arms >= 1")
    if noise < 0:
        raise InvalidParameterError("noise must be nonnegative")
    rng = np.random.default_rng(seed)
    counts = np.full(arms, n // arms)
    counts[: n % arms] += 1
    xs, labels = [], []
    for arm in range(arms):
        c = counts[arm]
        t = np.linspace(0.0, 1.0, c) if c > 1 else np.zeros(1)
        radius = _SPIRAL_R0 + (_SPIRAL_R1 - _SPIRAL_R0) * t
        angle = _SPIRAL_SPAN * t + 2.0 * np.pi * arm / arms
        xs.append(np.column_stack([radius * np.cos(angle), radius * np.sin(angle)]))
        labels.append(np.full(c, arm, dtype=np.int64))
    points = np.vstack(xs)
    if noise > 0:
        points = points + noise * rng.standard_normal(points.shape)
    return Dataset(points=points, attr_kind=NUMERIC, labels=np.concatenate(labels), name=f"spiral-{arms}")


def spiral_arm_curve(arm: int, arms: int, t: np.ndarray) -> np.ndarray:
    """Noise-free curve of one spiral arm at sweep parameters ``t`` in [0, 1]."""
    radius = _SPIRAL_R0 + (_SPIRAL_R1 - _SPIRAL_R0) * t
    angle = _SPIRAL_SPAN * t + 2.0 * np.pi * arm / arms
    return np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])


def dataset_fingerprint(ds: Dataset) -> str:
    """Content hash identifying a dataset independent of its source file."""
    h = hashlib.sha256()
    h.update(ds.attr_kind.encode())
    h.update(np.asarray(ds.points.shape, dtype=np.int64).tobytes())
    if ds.attr_kind == NUMERIC:
        h.update(np.ascontiguousarray(ds.points, dtype=np.float64).tobytes())
    else:
        h.update("\x1f".join(ds.points.ravel().tolist()).encode())
    if ds.labels is None:
        h.update(b"no-labels")
    else:
        h.update(np.ascontiguousarray(ds.labels, dtype=np.int64).tobytes())
    return h.hexdigest()[:16]
