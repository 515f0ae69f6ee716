"""Deterministic SVG rendering of a session document.

The drawing is a pure function of the document: x is the first embedding
coordinate plus the component offset, y is the potential axis.  Intact edges
are solid and colored by component; cut edges are dashed.  Identical
documents produce byte-identical SVG.
"""

from __future__ import annotations

import numpy as np

from .errors import DocumentError
from .session import components_from_cuts

_WIDTH, _HEIGHT, _MARGIN = 800.0, 600.0, 40.0

_PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
    "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2", "#dbdb8d",
]


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def render_rp(doc: dict) -> str:
    """Render the potential-axis view of a session document as SVG text."""
    try:
        coords = np.asarray(doc["coords"], dtype=np.float64)
        axis = np.asarray(doc["potential_axis"], dtype=np.float64)
        edges = doc["edges"]
        cuts = set(int(e) for e in doc["cuts"])
        offsets = {int(rep): np.asarray(off, dtype=np.float64) for rep, off in doc.get("offsets", [])}
        n = len(coords)
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed session document: {exc}") from exc
    if coords.ndim != 2 or len(axis) != n:
        raise DocumentError("coords/potential_axis shape mismatch")
    parent = np.full(n, -1, dtype=np.int64)
    for c, p, _ in edges:
        parent[int(c)] = int(p)
    assign = components_from_cuts(parent, cuts)
    _, reps = np.unique(assign.component_of, return_index=True)

    x = coords[:, 0].copy()
    for c in range(assign.k):
        off = offsets.get(int(reps[c]))
        if off is not None:
            x[assign.component_of == c] += off[0]
    y = axis

    # data range -> canvas, y flipped (SVG y grows downward)
    x0, x1 = float(x.min()), float(x.max())
    y0, y1 = float(y.min()), float(y.max())
    xspan = (x1 - x0) or 1.0
    yspan = (y1 - y0) or 1.0
    sx = lambda v: _MARGIN + (v - x0) / xspan * (_WIDTH - 2 * _MARGIN)
    sy = lambda v: _HEIGHT - _MARGIN - (v - y0) / yspan * (_HEIGHT - 2 * _MARGIN)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH:.0f}" height="{_HEIGHT:.0f}" '
        f'viewBox="0 0 {_WIDTH:.0f} {_HEIGHT:.0f}">',
        f'<rect width="{_WIDTH:.0f}" height="{_HEIGHT:.0f}" fill="white"/>',
    ]
    solid, dashed = [], []
    for c, p, _ in edges:
        c, p = int(c), int(p)
        line = (
            f'x1="{_fmt(sx(x[c]))}" y1="{_fmt(sy(y[c]))}" '
            f'x2="{_fmt(sx(x[p]))}" y2="{_fmt(sy(y[p]))}"'
        )
        if c in cuts:
            dashed.append(f'<line {line} stroke="#d62728" stroke-width="1.2" stroke-dasharray="6,4"/>')
        else:
            color = _PALETTE[assign.component_of[c] % len(_PALETTE)]
            solid.append(f'<line {line} stroke="{color}" stroke-width="1.0"/>')
    parts.extend(solid)
    parts.extend(dashed)
    for i in range(n):
        color = _PALETTE[assign.component_of[i] % len(_PALETTE)]
        parts.append(f'<circle cx="{_fmt(sx(x[i]))}" cy="{_fmt(sy(y[i]))}" r="2.5" fill="{color}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
