"""Local JSON-over-HTTP API for the store.

One process, many readers, one writer: read endpoints work on an immutable
in-memory snapshot; mutations are serialized by a writer lock, persisted to
the store file first, then swapped into place atomically, so a concurrent
reader always observes a complete pre- or post-state. Clients poll
GET /api/store with an etag and receive 304 while nothing changed.
"""

from __future__ import annotations

import hashlib
import json
import threading
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from filelock import FileLock
from pydantic import BaseModel

from . import __version__, decomposition, leannets, metrics
from .store import (
    STRICT,
    DuplicateRecordConflict,
    DuplicateRef,
    HashCollision,
    NotFound,
    SelfRef,
    Store,
    StoreError,
    UnknownRef,
    WouldBreakClosure,
    load,
    save,
)

# HTTP status per domain error code; anything unlisted maps to 400.
_STATUS = {
    NotFound.code: 404,
    leannets.UnknownAtom.code: 404,
    DuplicateRecordConflict.code: 409,
    HashCollision.code: 409,
    WouldBreakClosure.code: 409,
    UnknownRef.code: 422,
    DuplicateRef.code: 422,
    SelfRef.code: 422,
    metrics.EmptyGraph.code: 422,
    metrics.NonConvergence.code: 500,
}

# Codes surfaced to clients; axiom-level insert problems share one code.
_PUBLIC_CODE = {
    NotFound.code: "unknown_id",
    leannets.UnknownAtom.code: "unknown_id",
    UnknownRef.code: "axiom_violation",
    DuplicateRef.code: "axiom_violation",
    SelfRef.code: "axiom_violation",
}


class NerveBody(BaseModel):
    record: str
    refs: Optional[list[str]] = None


class PropagateBody(BaseModel):
    id: str
    reverse: bool = False


class _State:
    def __init__(self, store_path: str, mode: str):
        self.store_path = store_path
        self.mode = mode
        self.writer_lock = threading.Lock()
        self.file_lock = FileLock(store_path + ".lock")
        self.store: Store = load(store_path, mode=mode)
        self.etag = _etag(self.store)

    def replace(self, store: Store) -> None:
        self.store = store
        self.etag = _etag(store)


def _etag(store: Store) -> str:
    raw = store.to_canonical_json().encode("utf-8")
    return hashlib.sha256(raw).hexdigest()[:32]


def _fields_payload(record: str) -> dict:
    f = leannets.parse_record(record)
    return {
        "sort": f.sort,
        "source": f.source,
        "title": f.title,
        "notes": f.notes,
        "content": f.content,
        "state": f.state,
    }


def create_app(store_path: str, mode: str = STRICT) -> FastAPI:
    state = _State(store_path, mode)
    report = state.store.validate()
    if not report.is_well_formed:
        first = report.violations[0]
        raise StoreError(
            f"store fails validation: axiom {first.axiom} on {first.nerve_id}: "
            f"{first.message} ({len(report.violations)} violations)"
        )

    app = FastAPI(title="astrolabe", version=__version__)
    app.state.astro = state
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(StoreError)
    async def store_error_handler(_request: Request, exc: StoreError):
        return JSONResponse(
            status_code=_STATUS.get(exc.code, 400),
            content={
                "code": _PUBLIC_CODE.get(exc.code, exc.code),
                "message": str(exc),
                "details": {"cause": exc.code, **exc.details},
            },
        )

    @app.exception_handler(RequestValidationError)
    async def body_error_handler(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={
                "code": "malformed_body",
                "message": "request body does not match the endpoint schema",
                "details": {"errors": jsonable_encoder(exc.errors())},
            },
        )

    def snapshot() -> Store:
        return state.store

    def mutate(change) -> dict:
        """Copy, apply, persist, swap; the file is written before we answer."""
        with state.writer_lock:
            work = snapshot().copy()
            payload = change(work)
            with state.file_lock:
                save(work, state.store_path)
            state.replace(work)
            return payload

    @app.get("/api/store")
    def get_store(request: Request, response: Response, etag: Optional[str] = None):
        store = snapshot()
        current = state.etag
        offered = etag or request.headers.get("if-none-match")
        if offered is not None and offered.strip('"') == current:
            return Response(status_code=304, headers={"ETag": current})
        response.headers["ETag"] = current
        return json.loads(store.to_canonical_json())

    @app.get("/api/nerve/{nerve_id}")
    def get_nerve(nerve_id: str):
        store = snapshot()
        nerve = store.get(nerve_id)
        if nerve is None:
            raise NotFound(f"no such nerve: {nerve_id}")
        depths = decomposition.depth_filtration(store).depths
        return {
            "id": nerve.id,
            "ref": list(nerve.ref),
            "record": nerve.record,
            "fields": _fields_payload(nerve.record),
            "width": nerve.width,
            "depth": depths[nerve.id],
        }

    @app.post("/api/nerve")
    def post_nerve(body: NerveBody):
        def change(work: Store) -> dict:
            if body.refs:
                nerve_id = work.insert_nerve(body.record, body.refs)
            else:
                nerve_id = work.insert_atom(body.record)
            return {"id": nerve_id}

        return mutate(change)

    @app.delete("/api/nerve/{nerve_id}")
    def delete_nerve(nerve_id: str):
        def change(work: Store) -> dict:
            work.remove(nerve_id)
            return {"removed": nerve_id}

        return mutate(change)

    @app.get("/api/network")
    def get_network():
        return leannets.export_network(snapshot())

    @app.get("/api/metrics")
    def get_metrics(name: str, source: Optional[str] = None, seed: int = 0):
        skeleton = leannets.extract_skeleton(snapshot())
        vector = metrics.compute_metric(
            skeleton, name, params={"seed": seed}, source_filter=source
        )
        return {
            "name": vector.name,
            "params": vector.params,
            "values": dict(sorted(vector.values.items())),
        }

    @app.get("/api/cluster")
    def get_cluster(
        method: str, k: int = 2, seed: int = 0, source: Optional[str] = None
    ):
        skeleton = leannets.extract_skeleton(snapshot())
        result = metrics.cluster(
            skeleton, method, params={"k": k, "seed": seed}, source_filter=source
        )
        return {
            "method": result.method,
            "assignment": dict(sorted(result.assignment.items())),
            "quality": result.quality,
        }

    @app.post("/api/propagate")
    def post_propagate(body: PropagateBody):
        skeleton = leannets.extract_skeleton(snapshot())
        affected = leannets.propagate(skeleton, body.id, reverse=body.reverse)
        return {
            "changed": affected.changed,
            "affected": affected.affected,
            "hop_distance": affected.hop_distance,
        }

    @app.get("/api/version")
    def get_version():
        return {"version": __version__}

    @app.get("/api/health")
    def get_health():
        return {"status": "ok", "nerves": len(snapshot())}

    return app


def serve(store_path: str, port: int = 8787, host: str = "127.0.0.1", mode: str = STRICT):
    """Run the API with uvicorn until terminated."""
    import uvicorn

    uvicorn.run(create_app(store_path, mode=mode), host=host, port=port)
