"""Domain records for repository snapshots.

A snapshot is an immutable point-in-time capture of one repository's
issues and commits. All records are frozen dataclasses with tuple-valued
sequences so snapshots can be shared freely across threads and used as
cache keys. Construction normalizes but does not enforce cross-field
invariants; use :func:`validate_snapshot` (or loading, which calls it)
to check them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone

HEX_COLOR_RE = re.compile(r"^[0-9a-fA-F]{6}$")
SHA_RE = re.compile(r"^[0-9a-f]{40}$")

SCHEMA_VERSION = 1


def parse_utc(value: str) -> datetime:
    """Parse an ISO-8601 timestamp (trailing 'Z' or explicit offset) to UTC."""
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        raise ValueError(f"timestamp is not timezone-aware: {value!r}")
    return dt.astimezone(timezone.utc)


def format_utc(dt: datetime) -> str:
    """Render a UTC datetime as ISO-8601 with a trailing Z."""
    dt = _ensure_utc(dt)
    if dt.microsecond:
        return dt.strftime("%Y-%m-%dT%H:%M:%S.%fZ")
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def _ensure_utc(dt: datetime) -> datetime:
    if dt.tzinfo is None:
        raise ValueError("naive datetime; all snapshot timestamps must be UTC")
    return dt.astimezone(timezone.utc)


@dataclass(frozen=True)
class RepoRef:
    """A repository identified as owner/name."""

    owner: str
    name: str

    def __post_init__(self) -> None:
        for part in (self.owner, self.name):
            if not part or "/" in part:
                raise ValueError(f"invalid repo ref part: {part!r}")

    def __str__(self) -> str:
        return f"{self.owner}/{self.name}"

    @classmethod
    def parse(cls, text: str) -> "RepoRef":
        owner, sep, name = text.partition("/")
        if not sep:
            raise ValueError(f"expected owner/name, got {text!r}")
        return cls(owner, name)


@dataclass(frozen=True)
class Label:
    name: str
    color: str  # 6-hex-digit RGB, no leading '#'


@dataclass(frozen=True)
class IssueRecord:
    """One tracked issue with lifecycle timestamps, people, and labels."""

    number: int
    title: str
    state: str  # "open" | "closed"
    created_at: datetime
    closed_at: datetime | None
    creator: str
    closed_by: str | None = None
    assignees: tuple[str, ...] = ()
    labels: tuple[Label, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "created_at", _ensure_utc(self.created_at))
        if self.closed_at is not None:
            object.__setattr__(self, "closed_at", _ensure_utc(self.closed_at))
        object.__setattr__(self, "assignees", tuple(self.assignees))
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def is_open(self) -> bool:
        return self.state == "open"


@dataclass(frozen=True)
class FileChange:
    """Per-file line deltas of one commit; changes = additions + deletions."""

    path: str
    additions: int
    deletions: int
    changes: int


@dataclass(frozen=True)
class CommitRecord:
    """One commit with message, author, timestamp, and per-file deltas."""

    sha: str
    author: str
    committed_at: datetime
    message: str
    files: tuple[FileChange, ...] = ()
    stats_missing: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "committed_at", _ensure_utc(self.committed_at))
        object.__setattr__(self, "files", tuple(self.files))


@dataclass(frozen=True)
class RepoSnapshot:
    """Immutable point-in-time capture of a repository; the unit of analysis."""

    repo: RepoRef
    snapshot_time: datetime
    issues: tuple[IssueRecord, ...] = ()
    commits: tuple[CommitRecord, ...] = ()
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self) -> None:
        object.__setattr__(self, "snapshot_time", _ensure_utc(self.snapshot_time))
        object.__setattr__(self, "issues", tuple(self.issues))
        object.__setattr__(self, "commits", tuple(self.commits))

    def issue(self, number: int) -> IssueRecord | None:
        for issue in self.issues:
            if issue.number == number:
                return issue
        return None


@dataclass(frozen=True)
class Violation:
    """One broken snapshot invariant: which record and which rule."""

    record: str
    rule: str
    detail: str = ""

    def __str__(self) -> str:
        suffix = f": {self.detail}" if self.detail else ""
        return f"{self.record} violates '{self.rule}'{suffix}"


def validate_snapshot(snapshot: RepoSnapshot) -> list[Violation]:
    """Check every snapshot invariant; empty list means the snapshot is valid.

    Rules checked per issue: closed state carries closed_at (and open does
    not), closed_at >= created_at, unique number, label colors are 6-digit
    hex. Per commit: 40-hex sha, unique sha, unique file paths, changes =
    additions + deletions, non-negative deltas. Snapshot-wide: snapshot_time
    bounds every contained timestamp.
    """
    out: list[Violation] = []
    seen_numbers: set[int] = set()
    for issue in snapshot.issues:
        rec = f"issue {issue.number}"
        if issue.number in seen_numbers:
            out.append(Violation(rec, "unique number"))
        seen_numbers.add(issue.number)
        if issue.state not in ("open", "closed"):
            out.append(Violation(rec, "state enum", f"state={issue.state!r}"))
        if issue.state == "closed" and issue.closed_at is None:
            out.append(Violation(rec, "closed requires closed_at"))
        if issue.state == "open" and issue.closed_at is not None:
            out.append(Violation(rec, "open forbids closed_at"))
        if issue.closed_at is not None and issue.closed_at < issue.created_at:
            out.append(Violation(rec, "temporal order", "closed_at < created_at"))
        if not issue.creator:
            out.append(Violation(rec, "creator non-empty"))
        for label in issue.labels:
            if not HEX_COLOR_RE.match(label.color):
                out.append(Violation(rec, "label color", f"{label.name}={label.color!r}"))
        if issue.created_at > snapshot.snapshot_time:
            out.append(Violation(rec, "snapshot time bound", "created_at"))
        if issue.closed_at is not None and issue.closed_at > snapshot.snapshot_time:
            out.append(Violation(rec, "snapshot time bound", "closed_at"))

    seen_shas: set[str] = set()
    for commit in snapshot.commits:
        rec = f"commit {commit.sha[:12]}"
        if not SHA_RE.match(commit.sha):
            out.append(Violation(rec, "sha format", commit.sha))
        if commit.sha in seen_shas:
            out.append(Violation(rec, "unique sha"))
        seen_shas.add(commit.sha)
        seen_paths: set[str] = set()
        for change in commit.files:
            if change.path in seen_paths:
                out.append(Violation(rec, "unique file path", change.path))
            seen_paths.add(change.path)
            if change.additions < 0 or change.deletions < 0:
                out.append(Violation(rec, "non-negative deltas", change.path))
            if change.changes != change.additions + change.deletions:
                out.append(
                    Violation(
                        rec,
                        "changes sum",
                        f"{change.path}: {change.changes} != "
                        f"{change.additions}+{change.deletions}",
                    )
                )
        if commit.committed_at > snapshot.snapshot_time:
            out.append(Violation(rec, "snapshot time bound", "committed_at"))

    return out
