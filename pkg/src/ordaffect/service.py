"""HTTP service for region-based annotation sessions.

Annotators fetch a session's regions (with a preview flag when the
session's condition asks for one), watch each region's clip, submit one
relative trace per region, and trigger completion, which zero-baselines
every submitted trace and interpolates the full-session reconstruction.
Submitted traces are immutable; completion is idempotent. Writes are
serialized per session, so concurrent submissions to different regions of
one session cannot interleave.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Response
from fastapi.responses import FileResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .interpolate import interpolate
from .trace import AnnotationTrace, TimeInterval, zero_baseline

__all__ = ["ServiceSession", "SessionStore", "create_app", "CONDITIONS"]

CONDITIONS = ("full", "prefab_no_preview", "prefab_preview")


@dataclass
class ServiceSession:
    """Mutable server-side record of one annotation session."""

    session_id: str
    sample_rate_hz: Fraction
    total_len: int
    condition: str
    regions: list[TimeInterval]
    clip_paths: list[Path | None] = field(default_factory=list)
    traces: dict[int, np.ndarray] = field(default_factory=dict)
    reconstruction: np.ndarray | None = None

    def __post_init__(self):
        self.sample_rate_hz = Fraction(self.sample_rate_hz)
        if self.condition not in CONDITIONS:
            raise ValueError(f"unknown condition {self.condition!r}")
        self.regions = [getattr(r, "interval", r) for r in self.regions]
        ordered = sorted(self.regions)
        if ordered != self.regions:
            raise ValueError("regions must be sorted")
        for a, b in zip(ordered, ordered[1:]):
            if b.start_idx < a.end_idx:
                raise ValueError(f"regions overlap: {a} and {b}")
        if not self.clip_paths:
            self.clip_paths = [None] * len(self.regions)
        if len(self.clip_paths) != len(self.regions):
            raise ValueError("one clip reference per region required")

    @property
    def status(self) -> str:
        if self.reconstruction is not None:
            return "complete"
        if self.traces:
            return "in_progress"
        return "pending"


class SessionStore:
    """In-memory session registry with per-session write locks."""

    def __init__(self):
        self._sessions: dict[str, ServiceSession] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def add(self, session: ServiceSession) -> None:
        with self._registry_lock:
            if session.session_id in self._sessions:
                raise ValueError(f"duplicate session {session.session_id}")
            self._sessions[session.session_id] = session
            self._locks[session.session_id] = threading.Lock()

    def get(self, session_id: str) -> ServiceSession | None:
        return self._sessions.get(session_id)

    def lock(self, session_id: str) -> threading.Lock:
        return self._locks[session_id]

    def all(self) -> list[ServiceSession]:
        return [self._sessions[k] for k in sorted(self._sessions)]


class TraceBody(BaseModel):
    samples: list[float]


def _region_payload(sess: ServiceSession) -> dict:
    preview = sess.condition == "prefab_preview"
    rate = sess.sample_rate_hz
    return {
        "session_id": sess.session_id,
        "condition": sess.condition,
        "sample_rate_hz": str(rate),
        "regions": [
            {
                "index": k,
                "start_s": iv.start_s(rate),
                "end_s": iv.end_s(rate),
                "length_samples": len(iv),
                "preview": preview,
                "submitted": k in sess.traces,
                "clip_url": f"/sessions/{sess.session_id}/regions/{k}/clip",
            }
            for k, iv in enumerate(sess.regions)
        ],
    }


def create_app(store: SessionStore, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="affect annotation sessions")

    def _session(session_id: str) -> ServiceSession:
        sess = store.get(session_id)
        if sess is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return sess

    def _region(sess: ServiceSession, k: int) -> TimeInterval:
        if not 0 <= k < len(sess.regions):
            raise HTTPException(status_code=404,
                                detail=f"session {sess.session_id!r} has no region {k}")
        return sess.regions[k]

    @app.get("/sessions")
    def list_sessions():
        return {
            "sessions": [
                {
                    "session_id": s.session_id,
                    "condition": s.condition,
                    "status": s.status,
                    "sample_rate_hz": str(s.sample_rate_hz),
                    "total_len": s.total_len,
                    "region_count": len(s.regions),
                    "submitted_count": len(s.traces),
                }
                for s in store.all()
            ]
        }

    @app.get("/sessions/{session_id}/regions")
    def list_regions(session_id: str):
        return _region_payload(_session(session_id))

    @app.get("/sessions/{session_id}/regions/{k}/clip")
    def get_clip(session_id: str, k: int):
        sess = _session(session_id)
        _region(sess, k)
        path = sess.clip_paths[k]
        if path is None or not Path(path).exists():
            raise HTTPException(status_code=404,
                                detail=f"region {k} of {session_id!r} has no clip media")
        return FileResponse(path)

    @app.post("/sessions/{session_id}/regions/{k}/trace", status_code=201)
    def submit_trace(session_id: str, k: int, body: TraceBody):
        sess = _session(session_id)
        region = _region(sess, k)
        with store.lock(session_id):
            if k in sess.traces:
                raise HTTPException(status_code=409,
                                    detail=f"region {k} already has a submitted trace")
            if len(body.samples) != len(region):
                raise HTTPException(
                    status_code=422,
                    detail=f"region {k} spans {len(region)} samples, got {len(body.samples)}")
            sess.traces[k] = np.asarray(body.samples, dtype=np.float64)
        return {"session_id": session_id, "region": k, "length": len(region)}

    @app.post("/sessions/{session_id}/complete")
    def complete(session_id: str):
        sess = _session(session_id)
        with store.lock(session_id):
            missing = [k for k in range(len(sess.regions)) if k not in sess.traces]
            if missing:
                raise HTTPException(status_code=409,
                                    detail=f"regions not yet submitted: {missing}")
            if sess.reconstruction is None:
                pairs = []
                for k, iv in enumerate(sess.regions):
                    rel = zero_baseline(AnnotationTrace(sess.traces[k], sess.sample_rate_hz))
                    pairs.append((iv, rel.values))
                sess.reconstruction = interpolate(sess.total_len, pairs)
        return {"session_id": session_id, "status": sess.status,
                "total_len": sess.total_len}

    @app.get("/sessions/{session_id}/reconstruction")
    def reconstruction(session_id: str, format: str = "json"):
        sess = _session(session_id)
        if sess.reconstruction is None:
            raise HTTPException(status_code=404,
                                detail=f"session {session_id!r} is not completed")
        values = sess.reconstruction
        if format == "csv":
            rate = sess.sample_rate_hz
            lines = ["t_s,value"] + [
                f"{float(n / rate)!r},{float(v)!r}" for n, v in enumerate(values)]
            return Response("\n".join(lines) + "\n", media_type="text/csv")
        return {
            "session_id": session_id,
            "sample_rate_hz": str(sess.sample_rate_hz),
            "samples": [float(v) for v in values],
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
