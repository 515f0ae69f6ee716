"""Low-dimensional embedding of a distance matrix.

Two solvers: classical (Torgerson) MDS via the double-centered Gram matrix,
and iterative stress majorization initialized from the classical solution.
The objective is raw squared stress, sum over pairs of
(input distance - embedded distance)^2.

Small problems use a dense symmetric eigendecomposition; large ones use an
implicitly restarted Lanczos iteration on the centering operator, since only
the top one-to-three components are ever requested.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigsh
from scipy.spatial.distance import cdist, pdist

from .errors import InvalidParameterError
from .intree import Potentials

_DENSE_LIMIT = 512  # above this, eigenpairs come from Lanczos iteration


@dataclass(frozen=True)
class Embedding:
    """Coordinates in R^m plus the normalized display axis for potentials."""

    coords: np.ndarray
    dim: int
    potential_axis: np.ndarray
    stress: float

    @property
    def n(self) -> int:
        return self.coords.shape[0]


@dataclass(frozen=True)
class SmacofResult:
    coords: np.ndarray
    stress_path: np.ndarray  # stress at init and after each iteration
    n_iter: int


def raw_stress(D: np.ndarray, coords: np.ndarray) -> float:
    """Sum over unordered pairs of squared distance residuals."""
    n = D.shape[0]
    if n < 2:
        return 0.0
    iu = np.triu_indices(n, 1)
    resid = D[iu] - pdist(coords)
    return float(resid @ resid)


def _fix_signs(coords: np.ndarray) -> np.ndarray:
    """Make the first non-negligible entry of each column positive."""
    for col in range(coords.shape[1]):
        c = coords[:, col]
        peak = np.abs(c).max()
        if peak == 0.0:
            continue
        nz = np.flatnonzero(np.abs(c) > 1e-12 * peak)
        if nz.size and c[nz[0]] < 0:
            coords[:, col] = -c
    return coords


def classical_mds(D: np.ndarray, m: int) -> np.ndarray:
    """Embed via the top-m eigenpairs of B = -1/2 J D^2 J.

    Columns are ordered by descending eigenvalue, scaled by sqrt(eigenvalue)
    (negative eigenvalues clamp to zero), and sign-fixed so the first
    non-negligible coordinate of each column is positive.  Exact when D is
    realizable in R^m.
    """
    D = np.asarray(D, dtype=np.float64)
    n = D.shape[0]
    if m < 1:
        raise InvalidParameterError("embedding dimension must be >= 1")
    if m >= n:
        raise InvalidParameterError(f"embedding dimension {m} must be < N={n}")
    if n <= _DENSE_LIMIT:
        D2 = D * D
        rows = D2.mean(axis=1, keepdims=True)
        cols = D2.mean(axis=0, keepdims=True)
        B = -0.5 * (D2 - rows - cols + D2.mean())
        vals, vecs = np.linalg.eigh(B)
        vals, vecs = vals[::-1][:m], vecs[:, ::-1][:, :m]
    else:
        D2 = D * D

        def matvec(w):
            w = w - w.mean()
            u = D2 @ w
            return -0.5 * (u - u.mean())

        op = LinearOperator((n, n), matvec=matvec, dtype=np.float64)
        v0 = np.random.default_rng(0).standard_normal(n)
        vals, vecs = eigsh(op, k=m, which="LA", v0=v0)
        order = np.argsort(vals)[::-1]
        vals, vecs = vals[order], vecs[:, order]
    coords = vecs * np.sqrt(np.clip(vals, 0.0, None))[None, :]
    return _fix_signs(coords)


def smacof_mds(D: np.ndarray, m: int, init: np.ndarray, max_iter: int = 300, tol: float = 1e-6) -> SmacofResult:
    """Minimize raw stress by iterative majorization (Guttman transform).

    Stress is non-increasing across iterations; the loop stops when the
    relative stress decrease drops below ``tol`` or after ``max_iter``
    iterations.  A degenerate all-coincident init is perturbed
    deterministically instead of failing.
    """
    D = np.asarray(D, dtype=np.float64)
    n = D.shape[0]
    if tol <= 0:
        raise InvalidParameterError("tol must be positive")
    if init.shape != (n, m):
        raise InvalidParameterError(f"init must have shape ({n}, {m}), got {init.shape}")
    X = np.array(init, dtype=np.float64)
    if n == 1:
        return SmacofResult(coords=X, stress_path=np.zeros(1), n_iter=0)
    if np.ptp(X, axis=0).max() == 0.0:
        scale = 1e-8 * (1.0 + float(np.median(D)))
        X = X + scale * np.random.default_rng(0).standard_normal(X.shape)
    stresses = [raw_stress(D, X)]
    it = 0
    while it < max_iter and stresses[-1] > 0.0:
        it += 1
        dR = cdist(X, X)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dR > 0.0, D / dR, 0.0)
        B = -ratio
        np.fill_diagonal(B, ratio.sum(axis=1))
        X = (B @ X) / n
        s = raw_stress(D, X)
        prev = stresses[-1]
        stresses.append(s)
        if prev - s < tol * prev:
            break
    return SmacofResult(coords=X, stress_path=np.asarray(stresses), n_iter=it)


def normalize_potentials(P: Potentials | np.ndarray) -> np.ndarray:
    """Min-max normalize potential magnitudes into [0, 1]; all-equal maps to 0."""
    values = P.values if isinstance(P, Potentials) else np.asarray(P, dtype=np.float64)
    mag = np.abs(values)
    lo, hi = mag.min(), mag.max()
    if hi == lo:
        return np.zeros_like(mag)
    return (mag - lo) / (hi - lo)


def embed(D: np.ndarray, P: Potentials, m: int, method: str = "classical") -> Embedding:
    """Run the chosen solver and attach the normalized potential axis."""
    if method not in ("classical", "smacof"):
        raise InvalidParameterError(f"unknown method {method!r}")
    n = np.asarray(D).shape[0]
    axis = normalize_potentials(P)
    if n == 1:
        return Embedding(coords=np.zeros((1, m)), dim=m, potential_axis=axis, stress=0.0)
    coords = classical_mds(D, m)
    if method == "smacof":
        coords = smacof_mds(D, m, init=coords).coords
    return Embedding(coords=coords, dim=m, potential_axis=axis, stress=raw_stress(D, coords))
