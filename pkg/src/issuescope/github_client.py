"""GitHub REST v3 client for issue and commit harvesting.

Blocking, thread-safe operations over httpx. Pagination is explicit
(per_page=100, page=N), pull requests are filtered out of issue listings,
and commit records are enriched with per-file line statistics via a second
per-commit detail request running under bounded concurrency. Rate-limit
headers are parsed on every response; retries use jittered exponential
backoff for 5xx and transport errors only.

Auth comes from FetchConfig.auth_token or, when absent, the GITHUB_TOKEN
environment variable. Tests inject an httpx transport serving recorded
fixtures so the whole suite runs offline.
"""

from __future__ import annotations

import logging
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Any, Callable

import httpx

from .records import (
    CommitRecord,
    FileChange,
    IssueRecord,
    Label,
    RepoRef,
    parse_utc,
)

logger = logging.getLogger(__name__)

PUBLIC_API = "https://api.github.com"
PER_PAGE = 100
BACKOFF_BASE_SECONDS = 0.5


class GitHubApiError(Exception):
    """Base class for fetch failures."""


class NetworkError(GitHubApiError):
    """Transport failure or persistent server error after retries."""


class AuthError(GitHubApiError):
    """401, or 403 that is not a rate-limit rejection."""


class NotFound(GitHubApiError):
    """Repository (or resource) does not exist."""


class DecodeError(GitHubApiError):
    """Response payload is not the JSON shape the API documents."""


class RateLimited(GitHubApiError):
    """Request budget exhausted; carries the reset time."""

    def __init__(self, reset_at: datetime):
        self.reset_at = reset_at
        super().__init__(f"rate limited until {reset_at.isoformat()}")


class DetailError(GitHubApiError):
    """Per-commit detail enrichment failed; carries the offending sha."""

    def __init__(self, sha: str, cause: Exception):
        self.sha = sha
        self.cause = cause
        super().__init__(f"detail fetch failed for {sha}: {cause}")


@dataclass(frozen=True)
class FetchConfig:
    max_issues: int = 100
    auth_token: str | None = None
    max_in_flight: int = 4
    retry_limit: int = 3
    api_base_url: str = PUBLIC_API

    def __post_init__(self) -> None:
        if self.max_issues < 1:
            raise ValueError("max_issues must be >= 1")
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")
        if self.retry_limit < 0:
            raise ValueError("retry_limit must be >= 0")


@dataclass(frozen=True)
class RateLimitState:
    remaining: int
    reset_at: datetime


@dataclass(frozen=True)
class RateLimitDecision:
    kind: str  # proceed | sleep | abort
    sleep_seconds: float = 0.0


def respect_rate_limit(
    state: RateLimitState, policy: str = "fail", now: datetime | None = None
) -> RateLimitDecision:
    """Pure decision from the most recent rate-limit headers.

    Budget left means proceed. An exhausted budget either sleeps until the
    reset time (policy "wait") or aborts (policy "fail").
    """
    if policy not in ("wait", "fail"):
        raise ValueError(f"unknown rate-limit policy {policy!r}")
    if state.remaining > 0:
        return RateLimitDecision("proceed")
    if policy == "fail":
        return RateLimitDecision("abort")
    now = now or datetime.now(timezone.utc)
    return RateLimitDecision("sleep", max(0.0, (state.reset_at - now).total_seconds()))


def _parse_rate_limit(response: httpx.Response) -> RateLimitState | None:
    remaining = response.headers.get("X-RateLimit-Remaining")
    reset = response.headers.get("X-RateLimit-Reset")
    if remaining is None or reset is None:
        return None
    try:
        return RateLimitState(
            remaining=int(remaining),
            reset_at=datetime.fromtimestamp(int(reset), tz=timezone.utc),
        )
    except ValueError:
        return None


class _Session:
    """One transport session owned by a single public operation call."""

    def __init__(
        self,
        cfg: FetchConfig,
        transport: httpx.BaseTransport | None = None,
        rate_limit_policy: str = "fail",
        sleep_fn: Callable[[float], None] = time.sleep,
        rng: random.Random | None = None,
    ):
        token = cfg.auth_token or os.environ.get("GITHUB_TOKEN") or None
        headers = {"Accept": "application/vnd.github+json"}
        if token:
            headers["Authorization"] = f"Bearer {token}"
        self.cfg = cfg
        self.policy = rate_limit_policy
        self.sleep = sleep_fn
        self.rng = rng or random.Random()
        self.rate_limit: RateLimitState | None = None
        self.client = httpx.Client(
            base_url=cfg.api_base_url,
            headers=headers,
            timeout=30.0,
            transport=transport,
        )

    def close(self) -> None:
        self.client.close()

    def __enter__(self) -> "_Session":
        return self

    def __exit__(self, *exc: Any) -> None:
        self.close()

    def _backoff(self, attempt: int) -> None:
        delay = BACKOFF_BASE_SECONDS * (2**attempt) * (0.5 + 0.5 * self.rng.random())
        self.sleep(delay)

    def get_json(self, path: str, params: dict[str, str] | None = None) -> Any:
        """GET one URL with retry, rate-limit, and error mapping."""
        attempt = 0
        while True:
            try:
                response = self.client.get(path, params=params)
            except httpx.HTTPError as exc:
                if attempt < self.cfg.retry_limit:
                    logger.warning("transport error on %s, retrying: %s", path, exc)
                    self._backoff(attempt)
                    attempt += 1
                    continue
                raise NetworkError(f"transport failure on {path}: {exc}") from exc

            state = _parse_rate_limit(response)
            if state is not None:
                self.rate_limit = state

            if response.status_code in (403, 429) and state is not None and state.remaining == 0:
                decision = respect_rate_limit(state, self.policy)
                if decision.kind == "sleep":
                    logger.warning(
                        "rate limited on %s; sleeping %.0fs", path, decision.sleep_seconds
                    )
                    self.sleep(decision.sleep_seconds)
                    continue  # rate-limit waits do not consume retries
                raise RateLimited(state.reset_at)
            if response.status_code == 429:
                raise RateLimited(
                    datetime.now(timezone.utc)
                    + timedelta(seconds=int(response.headers.get("Retry-After", "60")))
                )
            if response.status_code in (401, 403):
                raise AuthError(f"{response.status_code} on {path}")
            if response.status_code == 404:
                raise NotFound(f"404 on {path}")
            if response.status_code >= 500:
                if attempt < self.cfg.retry_limit:
                    logger.warning("%d on %s, retrying", response.status_code, path)
                    self._backoff(attempt)
                    attempt += 1
                    continue
                raise NetworkError(
                    f"{response.status_code} on {path} after {attempt} retries"
                )
            if response.status_code != 200:
                raise DecodeError(f"unexpected status {response.status_code} on {path}")
            try:
                return response.json()
            except ValueError as exc:
                raise DecodeError(f"malformed JSON from {path}: {exc}") from exc

    def paginate(self, path: str, params: dict[str, str]) -> list[Any]:
        """Collect all pages of a list endpoint (per_page=100, page=N)."""
        items: list[Any] = []
        page = 1
        while True:
            page_params = dict(params, per_page=str(PER_PAGE), page=str(page))
            chunk = self.get_json(path, page_params)
            if not isinstance(chunk, list):
                raise DecodeError(f"expected a JSON array from {path}")
            items.extend(chunk)
            if len(chunk) < PER_PAGE:
                return items
            page += 1


def _require(item: dict, key: str, context: str) -> Any:
    if key not in item or item[key] is None:
        raise DecodeError(f"{context}: missing field {key!r}")
    return item[key]


def _issue_from_api(item: dict) -> IssueRecord:
    context = f"issue item {item.get('number', '?')}"
    closed_raw = item.get("closed_at")
    closed_by = item.get("closed_by") or None
    return IssueRecord(
        number=int(_require(item, "number", context)),
        title=str(_require(item, "title", context)),
        state=str(_require(item, "state", context)),
        created_at=parse_utc(_require(item, "created_at", context)),
        closed_at=parse_utc(closed_raw) if closed_raw else None,
        creator=str(_require(_require(item, "user", context), "login", context)),
        closed_by=str(closed_by["login"]) if closed_by else None,
        assignees=tuple(a["login"] for a in item.get("assignees") or []),
        labels=tuple(
            Label(str(l["name"]), str(l.get("color") or "ededed"))
            for l in item.get("labels") or []
        ),
    )


def fetch_issues(
    repo: RepoRef,
    cfg: FetchConfig,
    *,
    transport: httpx.BaseTransport | None = None,
    rate_limit_policy: str = "fail",
    sleep_fn: Callable[[float], None] = time.sleep,
) -> list[IssueRecord]:
    """The newest issues of a repository, excluding pull requests.

    Items carrying a pull-request marker are excluded before they count
    toward cfg.max_issues. At most cfg.max_issues records are returned,
    ordered newest-created first, timestamps normalized to UTC.
    """
    with _Session(cfg, transport, rate_limit_policy, sleep_fn) as session:
        collected: list[IssueRecord] = []
        page = 1
        while len(collected) < cfg.max_issues:
            params = {
                "state": "all",
                "sort": "created",
                "direction": "desc",
                "per_page": str(PER_PAGE),
                "page": str(page),
            }
            try:
                chunk = session.get_json(
                    f"/repos/{repo.owner}/{repo.name}/issues", params
                )
            except NotFound:
                raise NotFound(f"repository {repo} not found") from None
            if not isinstance(chunk, list):
                raise DecodeError("issue listing is not a JSON array")
            for item in chunk:
                if "pull_request" in item:
                    continue  # PRs come intermixed with issues; drop them
                collected.append(_issue_from_api(item))
                if len(collected) >= cfg.max_issues:
                    break
            if len(chunk) < PER_PAGE:
                break
            page += 1
        collected.sort(key=lambda i: (i.created_at, -i.number), reverse=True)
        return collected[: cfg.max_issues]


def _commit_from_listing(item: dict) -> tuple[str, str, datetime, str]:
    context = f"commit item {item.get('sha', '?')}"
    sha = str(_require(item, "sha", context))
    commit = _require(item, "commit", context)
    author_obj = item.get("author") or None
    if author_obj and author_obj.get("login"):
        author = str(author_obj["login"])
    else:
        author = str((commit.get("author") or {}).get("name") or "unknown")
    when_raw = (commit.get("committer") or commit.get("author") or {}).get("date")
    if not when_raw:
        raise DecodeError(f"{context}: missing commit date")
    return sha, author, parse_utc(when_raw), str(commit.get("message") or "")


def _enrich_commit(
    session: _Session,
    repo: RepoRef,
    sha: str,
    author: str,
    when: datetime,
    message: str,
) -> CommitRecord:
    try:
        detail = session.get_json(f"/repos/{repo.owner}/{repo.name}/commits/{sha}")
    except GitHubApiError as exc:
        raise DetailError(sha, exc) from exc
    raw_files = detail.get("files")
    stats_missing = raw_files is None
    files: list[FileChange] = []
    for raw in raw_files or []:
        path = raw.get("filename")
        if not path:
            continue
        additions = raw.get("additions")
        deletions = raw.get("deletions")
        if additions is None or deletions is None:
            stats_missing = True
            additions, deletions = 0, 0
        files.append(FileChange(str(path), int(additions), int(deletions), int(additions) + int(deletions)))
    return CommitRecord(
        sha=sha,
        author=author,
        committed_at=when,
        message=message,
        files=tuple(files),
        stats_missing=stats_missing,
    )


def fetch_commits(
    repo: RepoRef,
    since: datetime,
    cfg: FetchConfig,
    *,
    transport: httpx.BaseTransport | None = None,
    rate_limit_policy: str = "fail",
    sleep_fn: Callable[[float], None] = time.sleep,
) -> list[CommitRecord]:
    """Default-branch commits with committed_at >= since, newest first.

    Each record is enriched with per-file additions/deletions via a second
    per-commit detail request; at most cfg.max_in_flight detail requests
    run at once. Commits whose detail omits statistics keep an empty (or
    zeroed) file list and are flagged stats_missing instead of being
    dropped.
    """
    with _Session(cfg, transport, rate_limit_policy, sleep_fn) as session:
        listing = session.paginate(
            f"/repos/{repo.owner}/{repo.name}/commits",
            {"since": since.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")},
        )
        heads = []
        for item in listing:
            sha, author, when, message = _commit_from_listing(item)
            if when >= since:
                heads.append((sha, author, when, message))

        with ThreadPoolExecutor(max_workers=cfg.max_in_flight) as pool:
            records = list(
                pool.map(lambda h: _enrich_commit(session, repo, *h), heads)
            )
        records.sort(key=lambda c: (c.committed_at, c.sha), reverse=True)
        return records
