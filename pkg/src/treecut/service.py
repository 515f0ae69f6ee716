"""HTTP facade over the session state machine.

Every endpoint is a thin adapter around the library: identical inputs through
the API and through direct calls produce identical session documents.
Sessions persist to the data directory on each successful mutation; a failed
request leaves both the in-memory and persisted state unchanged.  Embeddings
for datasets above the synchronous size limit run as polled background jobs.
"""

from __future__ import annotations

import argparse
import json
import os
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import session as sessionlib
from .datasets import Dataset, dataset_fingerprint, parse_csv
from .errors import (
    ConstraintError,
    DatasetFormatError,
    DocumentError,
    EdgeAlreadyCutError,
    EdgeNotCutError,
    InvalidParameterError,
    InvalidTreeError,
    MetricMismatchError,
    MissingLabelsError,
    NodeRangeError,
    NoUncutEdgesError,
    OverlappingChildrenError,
    SingletonComponentError,
    TreecutError,
    UnknownComponentError,
    UnknownEdgeError,
)
from .session import ConstraintSet, Session, create_session, document_bytes, from_document, layout_dict, to_document


class UnknownDatasetError(TreecutError):
    pass


class UnknownSessionError(TreecutError):
    pass


class UnknownJobError(TreecutError):
    pass


# exception type -> (http status, machine code)
ERROR_MAP: dict[type, tuple[int, str]] = {
    UnknownDatasetError: (404, "dataset_not_found"),
    UnknownSessionError: (404, "session_not_found"),
    UnknownJobError: (404, "job_not_found"),
    UnknownEdgeError: (404, "edge_not_found"),
    UnknownComponentError: (404, "component_not_found"),
    NodeRangeError: (404, "node_not_found"),
    EdgeAlreadyCutError: (409, "edge_already_cut"),
    EdgeNotCutError: (409, "edge_not_cut"),
    NoUncutEdgesError: (409, "no_uncut_edges"),
    SingletonComponentError: (409, "singleton_component"),
    OverlappingChildrenError: (409, "overlapping_children"),
    MissingLabelsError: (409, "missing_labels"),
    DatasetFormatError: (400, "bad_dataset"),
    MetricMismatchError: (400, "metric_mismatch"),
    InvalidParameterError: (400, "bad_parameter"),
    InvalidTreeError: (400, "bad_tree"),
    ConstraintError: (400, "bad_constraints"),
    DocumentError: (400, "bad_document"),
}


def _error_response(exc: TreecutError) -> JSONResponse:
    status, code = ERROR_MAP.get(type(exc), (500, "internal_error"))
    return JSONResponse(status_code=status, content={"code": code, "message": str(exc)})


class Store:
    """Disk-backed dataset and session store with per-session write locks."""

    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        (self.data_dir / "datasets").mkdir(parents=True, exist_ok=True)
        (self.data_dir / "sessions").mkdir(parents=True, exist_ok=True)
        self._datasets: dict[str, Dataset] = {}
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.RLock] = {}
        self._guard = threading.Lock()

    # -- datasets --

    def add_dataset(self, text: str, attr_kind: str, label_column: int | None, name: str) -> Dataset:
        ds = parse_csv(text, attr_kind, label_column=label_column, name=name)
        ref = dataset_fingerprint(ds)
        with self._guard:
            if ref not in self._datasets:
                self._datasets[ref] = ds
                self._write(self.data_dir / "datasets" / f"{ref}.csv", text.encode())
                meta = {"attr_kind": attr_kind, "label_column": label_column, "name": name}
                self._write(self.data_dir / "datasets" / f"{ref}.json", json.dumps(meta, sort_keys=True).encode())
        return self._datasets[ref]

    def dataset(self, ref: str) -> Dataset:
        with self._guard:
            if ref in self._datasets:
                return self._datasets[ref]
        csv_path = self.data_dir / "datasets" / f"{ref}.csv"
        meta_path = self.data_dir / "datasets" / f"{ref}.json"
        if not csv_path.is_file() or not meta_path.is_file():
            raise UnknownDatasetError(f"no dataset {ref}")
        meta = json.loads(meta_path.read_text())
        ds = parse_csv(csv_path.read_text(), meta["attr_kind"], label_column=meta["label_column"], name=meta["name"])
        with self._guard:
            self._datasets.setdefault(ref, ds)
        return self._datasets[ref]

    # -- sessions --

    def lock(self, session_id: str) -> threading.RLock:
        with self._guard:
            return self._locks.setdefault(session_id, threading.RLock())

    def put_session(self, s: Session) -> None:
        with self._guard:
            self._sessions[s.id] = s
        self.persist(s)

    def session(self, session_id: str) -> Session:
        with self._guard:
            if session_id in self._sessions:
                return self._sessions[session_id]
        path = self.data_dir / "sessions" / f"{session_id}.json"
        if not path.is_file():
            raise UnknownSessionError(f"no session {session_id}")
        doc = json.loads(path.read_text())
        s = from_document(doc, self.dataset(doc["dataset"]))
        with self._guard:
            self._sessions.setdefault(session_id, s)
        return self._sessions[session_id]

    def resolve_children(self, s: Session) -> None:
        for link in s.children:
            if link.session is None:
                link.session = self.session(link.session_id)
            self.resolve_children(link.session)

    def persist(self, s: Session) -> None:
        self._write(self.data_dir / "sessions" / f"{s.id}.json", document_bytes(to_document(s)))

    @staticmethod
    def _write(path: Path, data: bytes) -> None:
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_bytes(data)
        tmp.replace(path)


class Jobs:
    """Background runner for embeddings too large to answer synchronously."""

    def __init__(self, workers: int):
        self._pool = ThreadPoolExecutor(max_workers=workers)
        self._jobs: dict[str, dict] = {}
        self._guard = threading.Lock()

    def submit(self, fn) -> str:
        job_id = "j" + uuid.uuid4().hex[:15]
        with self._guard:
            self._jobs[job_id] = {"status": "pending"}

        def run():
            try:
                result = fn()
                with self._guard:
                    self._jobs[job_id] = {"status": "done", "session": result}
            except Exception as exc:  # surfaced through polling
                with self._guard:
                    self._jobs[job_id] = {"status": "failed", "error": str(exc)}

        self._pool.submit(run)
        return job_id

    def status(self, job_id: str) -> dict:
        with self._guard:
            if job_id not in self._jobs:
                raise UnknownJobError(f"no job {job_id}")
            return dict(self._jobs[job_id])


class SessionRequest(BaseModel):
    dataset: str
    sigma: float | str | None = None
    metric: str | None = None
    dim: int = 1
    method: str = "classical"


class CrossRequest(BaseModel):
    point: list[float]
    use_potential_axis: bool = True


class RestoreRequest(BaseModel):
    edge: int


class OffsetRequest(BaseModel):
    component: int
    delta: list[float]


class DivideRequest(BaseModel):
    component: int


class ConquerRequest(BaseModel):
    component: int
    sigma: float


class ConstraintsRequest(BaseModel):
    must_link: list[list[int]] = []
    cannot_link: list[list[int]] = []
    labels: list[list[int]] = []


def create_app(data_dir: str | Path, sync_limit: int = 2000, job_workers: int = 2) -> FastAPI:
    app = FastAPI(title="treecut")
    store = Store(Path(data_dir))
    jobs = Jobs(job_workers)
    app.state.store = store

    @app.exception_handler(TreecutError)
    async def _handle(request: Request, exc: TreecutError):
        return _error_response(exc)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/datasets")
    async def upload_dataset(request: Request, attr_kind: str = "numeric", label_column: int | None = None, name: str = ""):
        text = (await request.body()).decode("utf-8")
        ds = store.add_dataset(text, attr_kind, label_column, name)
        return {"dataset": dataset_fingerprint(ds), "n": ds.n, "d": ds.d}

    def _finish_session(s: Session) -> str:
        store.put_session(s)
        return s.id

    @app.post("/sessions")
    def create(req: SessionRequest):
        ds = store.dataset(req.dataset)

        def build() -> str:
            return _finish_session(create_session(ds, sigma=req.sigma, metric=req.metric, dim=req.dim, method=req.method))

        if ds.n > sync_limit:
            return JSONResponse(status_code=202, content={"job": jobs.submit(build)})
        session_id = build()
        return {"session": session_id, "layout": layout_dict(store.session(session_id))}

    @app.get("/jobs/{job_id}")
    def job_status(job_id: str):
        return jobs.status(job_id)

    @app.get("/sessions/{session_id}")
    def get_layout(session_id: str):
        return layout_dict(store.session(session_id))

    @app.post("/sessions/{session_id}/crosses")
    def place_cross(session_id: str, req: CrossRequest):
        s = store.session(session_id)
        with store.lock(session_id):
            edge = s.nearest_edge(req.point, include_potential_axis=req.use_potential_axis)
            assign = s.cut_edge(edge)
            store.persist(s)
        return {"edge": edge, "components": {"assignment": assign.component_of.tolist(), "k": assign.k}}

    @app.post("/sessions/{session_id}/restore")
    def restore(session_id: str, req: RestoreRequest):
        s = store.session(session_id)
        with store.lock(session_id):
            assign = s.restore_edge(req.edge)
            store.persist(s)
        return {"components": {"assignment": assign.component_of.tolist(), "k": assign.k}}

    @app.post("/sessions/{session_id}/offset")
    def offset(session_id: str, req: OffsetRequest):
        s = store.session(session_id)
        with store.lock(session_id):
            s.set_component_offset(req.component, req.delta)
            store.persist(s)
        return {"ok": True}

    def _refine(session_id: str, fn):
        s = store.session(session_id)
        with store.lock(session_id):
            child = fn(s)
            store.put_session(child)
            store.persist(s)
        return child

    @app.post("/sessions/{session_id}/divide")
    def divide(session_id: str, req: DivideRequest):
        s = store.session(session_id)
        size = int((s.components().component_of == req.component).sum())
        if size > sync_limit:
            return JSONResponse(status_code=202, content={"job": jobs.submit(lambda: _refine(session_id, lambda p: p.divide(req.component)).id)})
        child = _refine(session_id, lambda p: p.divide(req.component))
        return {"session": child.id, "layout": layout_dict(child)}

    @app.post("/sessions/{session_id}/conquer")
    def conquer(session_id: str, req: ConquerRequest):
        s = store.session(session_id)
        size = int((s.components().component_of == req.component).sum())
        if size > sync_limit:
            return JSONResponse(status_code=202, content={"job": jobs.submit(lambda: _refine(session_id, lambda p: p.conquer(req.component, req.sigma)).id)})
        child = _refine(session_id, lambda p: p.conquer(req.component, req.sigma))
        return {"session": child.id, "layout": layout_dict(child)}

    @app.put("/sessions/{session_id}/constraints")
    def put_constraints(session_id: str, req: ConstraintsRequest):
        s = store.session(session_id)
        with store.lock(session_id):
            cs = ConstraintSet(
                must_link=[tuple(p) for p in req.must_link],
                cannot_link=[tuple(p) for p in req.cannot_link],
                labels={int(n): int(c) for n, c in req.labels},
            )
            s.set_constraints(cs)
            store.persist(s)
        return {"ok": True}

    @app.get("/sessions/{session_id}/violations")
    def violations(session_id: str):
        s = store.session(session_id)
        store.resolve_children(s)
        report = s.check_constraints(assignment=sessionlib.merge_results(s))
        return {
            "must_link": [list(p) for p in report.must_link],
            "cannot_link": [list(p) for p in report.cannot_link],
            "mixed_label_components": [[c, list(classes)] for c, classes in report.mixed_label_components],
        }

    @app.get("/sessions/{session_id}/assignment")
    def assignment(session_id: str):
        s = store.session(session_id)
        store.resolve_children(s)
        return Response(content=sessionlib.assignment_csv(s), media_type="text/csv")

    return app


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="treecut-service", description="serve the clustering workbench API")
    parser.add_argument("--bind", default=os.environ.get("TREECUT_BIND", "127.0.0.1:8821"), help="host:port")
    parser.add_argument("--data-dir", default=os.environ.get("TREECUT_DATA_DIR", "./treecut-data"))
    parser.add_argument("--job-workers", type=int, default=int(os.environ.get("TREECUT_JOB_WORKERS", "2")))
    parser.add_argument("--sync-limit", type=int, default=int(os.environ.get("TREECUT_SYNC_LIMIT", "2000")))
    args = parser.parse_args(argv)
    host, _, port = args.bind.rpartition(":")
    import uvicorn

    app = create_app(args.data_dir, sync_limit=args.sync_limit, job_workers=args.job_workers)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


if __name__ == "__main__":
    main()
