"""Batch driver: run the full pipeline and emit artifacts without the UI.

Subcommands:
  run     pipeline over a CSV file, optional longest-k cut protocol;
          writes session.json, assignment.csv, layout.json, render.svg
  render  re-render an existing session document to SVG

Exit code 0 on success; on failure, one machine-readable JSON error line is
printed to stderr and the exit code is nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .datasets import parse_csv
from .errors import TreecutError
from .render import render_rp
from .session import (
    assignment_csv,
    create_session,
    cut_longest_edges,
    document_bytes,
    error_rate,
    layout_dict,
    merge_results,
    to_document,
)

_KIND_OF_METRIC = {"euclidean": "numeric", "hamming": "categorical"}


def _fmt_rate(x: float) -> str:
    return f"{x:g}"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treecut", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the pipeline over a CSV dataset")
    run.add_argument("--input", required=True, help="CSV dataset path")
    run.add_argument("--metric", required=True, choices=("euclidean", "hamming"))
    run.add_argument("--sigma", default="auto", help='kernel width, a number or "auto"')
    run.add_argument("--dim", type=int, default=1, help="embedding dimension (1-3)")
    run.add_argument("--method", default="classical", choices=("classical", "smacof"))
    run.add_argument("--cut-longest", type=int, default=0, metavar="K", help="cut the K longest tree edges")
    run.add_argument("--labels-col", type=int, default=None, metavar="IDX", help="0-based ground-truth column index")
    run.add_argument("--out", required=True, help="output directory")

    render = sub.add_parser("render", help="render a session document to SVG")
    render.add_argument("--doc", required=True, help="session document path")
    render.add_argument("--out", required=True, help="output SVG path")
    return parser


def _run(args: argparse.Namespace) -> int:
    path = Path(args.input)
    if not path.is_file():
        raise TreecutError(f"input file not found: {path}")
    if args.sigma == "auto":
        sigma = None
    else:
        try:
            sigma = float(args.sigma)
        except ValueError:
            raise TreecutError(f'--sigma must be a number or "auto", got {args.sigma!r}') from None
    ds = parse_csv(path.read_text(), _KIND_OF_METRIC[args.metric], label_column=args.labels_col, name=path.stem)
    session = create_session(ds, sigma=sigma, metric=args.metric, dim=args.dim, method=args.method)
    cut_longest_edges(session, args.cut_longest)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    doc = to_document(session)
    (out / "session.json").write_bytes(document_bytes(doc))
    merged = merge_results(session)
    (out / "assignment.csv").write_text(assignment_csv(session, merged))
    (out / "layout.json").write_bytes(document_bytes(layout_dict(session)))
    (out / "render.svg").write_text(render_rp(doc))
    if ds.labels is not None:
        print(f"clusters={merged.k} error_rate={_fmt_rate(error_rate(merged, ds.labels))}")
    else:
        print(f"clusters={merged.k}")
    return 0


def _render(args: argparse.Namespace) -> int:
    path = Path(args.doc)
    if not path.is_file():
        raise TreecutError(f"document not found: {path}")
    doc = json.loads(path.read_text())
    Path(args.out).write_text(render_rp(doc))
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run(args)
        return _render(args)
    except TreecutError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
