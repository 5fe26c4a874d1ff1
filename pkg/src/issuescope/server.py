"""HTTP JSON API over pre-collected snapshot directories.

The server is read-only: snapshots are loaded once at startup into an
immutable set keyed by owner/name, request handling takes no locks, and a
reload (wired to SIGHUP by the CLI) swaps the whole set atomically.
Every error body is JSON {code, message}. Graph responses carry a strong
ETag derived from (snapshot_time, issue number, seed) since layout is the
most expensive computation served.
"""

from __future__ import annotations

import hashlib
import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import payloads
from .analytics import BinRange
from .colors import QUALITATIVE
from .records import RepoSnapshot, format_utc
from .snapshot_store import SnapshotStoreError, load_snapshot

logger = logging.getLogger(__name__)

DEFAULT_GRAPH_SEED = 42
MAX_TOP_SEGMENTS = len(QUALITATIVE) - 1  # last palette color is reserved for OTHERS


@dataclass(frozen=True)
class ServerConfig:
    data_dir: str
    bind_address: str = "127.0.0.1:8000"
    cors_allowed_origin: str = "*"
    static_dir: str | None = None


class ApiError(Exception):
    """Maps directly to a JSON {code, message} error response."""

    def __init__(self, status: int, code: str, message: str):
        self.status = status
        self.code = code
        self.message = message
        super().__init__(message)


class SnapshotSet:
    """All valid snapshots under a data directory, swapped atomically on reload."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self._by_repo: dict[tuple[str, str], RepoSnapshot] = {}
        self.reload()

    def reload(self) -> None:
        loaded: dict[tuple[str, str], RepoSnapshot] = {}
        if not self.data_dir.is_dir():
            raise NotADirectoryError(f"data dir {self.data_dir} does not exist")
        for entry in sorted(self.data_dir.iterdir()):
            if not entry.is_dir():
                continue
            try:
                snapshot = load_snapshot(entry)
            except (SnapshotStoreError, OSError, ValueError) as exc:
                logger.warning("skipping invalid snapshot dir %s: %s", entry, exc)
                continue
            key = (snapshot.repo.owner, snapshot.repo.name)
            if key in loaded and loaded[key].snapshot_time >= snapshot.snapshot_time:
                continue  # keep the newer capture of the same repo
            loaded[key] = snapshot
        self._by_repo = loaded  # atomic swap; readers keep their reference

    def entries(self) -> list[RepoSnapshot]:
        snapshots = self._by_repo
        return [snapshots[key] for key in sorted(snapshots)]

    def get(self, owner: str, name: str) -> RepoSnapshot:
        snapshot = self._by_repo.get((owner, name))
        if snapshot is None:
            raise ApiError(404, "unknown_repo", f"no snapshot for {owner}/{name}")
        return snapshot


def _parse_bool(raw: str | None, name: str) -> bool:
    if raw is None or raw == "" or raw.lower() == "false":
        return False
    if raw.lower() == "true":
        return True
    raise ApiError(400, "invalid_param", f"{name} must be true or false")


@lru_cache(maxsize=128)
def _cached_graph(snapshot: RepoSnapshot, number: int, seed: int) -> dict:
    issue = snapshot.issue(number)
    assert issue is not None  # checked by the route before caching
    return payloads.graph_payload(snapshot, issue, seed=seed)


def create_app(config: ServerConfig) -> FastAPI:
    """Build the FastAPI application serving one data directory.

    The ISSUESCOPE_DATA environment variable overrides config.data_dir.
    """
    data_dir = os.environ.get("ISSUESCOPE_DATA") or config.data_dir
    snapshots = SnapshotSet(data_dir)

    app = FastAPI(title="issuescope", version="0.1.0", docs_url=None, redoc_url=None)
    app.state.snapshots = snapshots
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[config.cors_allowed_origin],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def on_api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.status, content={"code": exc.code, "message": exc.message}
        )

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(
        _request: Request, exc: RequestValidationError
    ) -> JSONResponse:
        return JSONResponse(
            status_code=400, content={"code": "invalid_request", "message": str(exc)}
        )

    @app.exception_handler(Exception)
    async def on_unexpected(_request: Request, exc: Exception) -> JSONResponse:
        logger.exception("unhandled error: %s", exc)
        return JSONResponse(
            status_code=500, content={"code": "internal_error", "message": str(exc)}
        )

    @app.get("/api/repos")
    def list_repos() -> list[dict]:
        return [payloads.repo_entry(s) for s in snapshots.entries()]

    @app.get("/api/repos/{owner}/{name}/timeline")
    def timeline(owner: str, name: str, mode: str = "status") -> dict:
        if mode not in ("status", "labels"):
            raise ApiError(400, "invalid_mode", f"mode must be status or labels, got {mode!r}")
        return payloads.timeline_payload(snapshots.get(owner, name), mode)

    @app.get("/api/repos/{owner}/{name}/issues/{number}/graph")
    def issue_graph(
        owner: str,
        name: str,
        number: int,
        request: Request,
        response: Response,
        seed: int = DEFAULT_GRAPH_SEED,
    ):
        snapshot = snapshots.get(owner, name)
        if snapshot.issue(number) is None:
            raise ApiError(404, "unknown_issue", f"issue {number} not in snapshot")
        tag_source = f"{format_utc(snapshot.snapshot_time)}:{number}:{seed}"
        etag = '"' + hashlib.sha256(tag_source.encode()).hexdigest()[:32] + '"'
        if request.headers.get("if-none-match") == etag:
            return Response(status_code=304, headers={"ETag": etag})
        response.headers["ETag"] = etag
        return _cached_graph(snapshot, number, seed)

    @app.get("/api/repos/{owner}/{name}/files/summary")
    def files_summary(
        owner: str,
        name: str,
        bugOnly: str | None = None,
        exclude: str | None = None,
        bin: str | None = None,
        top: int = 5,
    ) -> dict:
        snapshot = snapshots.get(owner, name)
        if not 1 <= top <= MAX_TOP_SEGMENTS:
            raise ApiError(400, "invalid_param", f"top must be in [1, {MAX_TOP_SEGMENTS}]")
        bin_filter = None
        if bin:
            try:
                bin_filter = BinRange.parse(bin)
            except ValueError as exc:
                raise ApiError(400, "invalid_bin", str(exc)) from None
        excluded = frozenset(
            part for part in (exclude or "").split(",") if part
        )
        return payloads.summary_payload(
            snapshot,
            top_n=top,
            bug_only=_parse_bool(bugOnly, "bugOnly"),
            excluded=excluded,
            bin_filter=bin_filter,
        )

    @app.get("/api/repos/{owner}/{name}/files/histogram")
    def files_histogram(owner: str, name: str, bugOnly: str | None = None) -> list[dict]:
        snapshot = snapshots.get(owner, name)
        return payloads.histogram_payload(snapshot, bug_only=_parse_bool(bugOnly, "bugOnly"))

    if config.static_dir:
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app
