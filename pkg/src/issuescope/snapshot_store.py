"""Save and load repository snapshots as CSV files plus a meta.json.

Layout of one snapshot directory:

    meta.json     {owner, name, snapshot_time, schema_version}
    issues.csv    number,title,state,created_at,closed_at,creator,closed_by,assignees,labels
    commits.csv   sha,author,committed_at,message,stats_missing
    files.csv     sha,path,additions,deletions,changes

Encoding is UTF-8 with RFC 4180 quoting and LF line endings; timestamps are
ISO-8601 with a trailing Z. List-valued issue cells pack entries with '|'
separators, labels as name#color pairs; '|', '#', and '%' inside names are
percent-escaped. Saving is deterministic: the same snapshot always produces
byte-identical files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .records import (
    SCHEMA_VERSION,
    CommitRecord,
    FileChange,
    IssueRecord,
    Label,
    RepoRef,
    RepoSnapshot,
    Violation,
    format_utc,
    parse_utc,
    validate_snapshot,
)

ISSUES_HEADER = [
    "number",
    "title",
    "state",
    "created_at",
    "closed_at",
    "creator",
    "closed_by",
    "assignees",
    "labels",
]
COMMITS_HEADER = ["sha", "author", "committed_at", "message", "stats_missing"]
FILES_HEADER = ["sha", "path", "additions", "deletions", "changes"]

SNAPSHOT_FILES = ("meta.json", "issues.csv", "commits.csv", "files.csv")


class SnapshotStoreError(Exception):
    """Base class for snapshot persistence failures."""


class MissingFileError(SnapshotStoreError):
    """A required snapshot file is absent."""


class SchemaVersionMismatch(SnapshotStoreError):
    """The on-disk schema_version is not one this loader understands."""


class SerializationError(SnapshotStoreError):
    """A field cannot be represented within the CSV escaping contract."""


class InvariantViolation(SnapshotStoreError):
    """Loaded data breaks a snapshot invariant; names the row and rule."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


def _escape_packed(name: str) -> str:
    # '%' first so escape sequences themselves survive the round trip.
    return name.replace("%", "%25").replace("|", "%7C").replace("#", "%23")


def _unescape_packed(cell: str) -> str:
    return cell.replace("%7C", "|").replace("%23", "#").replace("%25", "%")


def _pack_assignees(assignees: tuple[str, ...]) -> str:
    return "|".join(_escape_packed(a) for a in assignees)


def _pack_labels(labels: tuple[Label, ...]) -> str:
    return "|".join(f"{_escape_packed(l.name)}#{l.color}" for l in labels)


def _unpack_assignees(cell: str) -> tuple[str, ...]:
    if not cell:
        return ()
    return tuple(_unescape_packed(part) for part in cell.split("|"))


def _unpack_labels(cell: str, where: str) -> tuple[Label, ...]:
    if not cell:
        return ()
    labels = []
    for part in cell.split("|"):
        name, sep, color = part.rpartition("#")
        if not sep:
            raise InvariantViolation([Violation(where, "label cell format", part)])
        labels.append(Label(_unescape_packed(name), color))
    return tuple(labels)


def _check_writable_text(value: str, where: str) -> str:
    if "\0" in value:
        raise SerializationError(f"{where}: NUL byte cannot be stored in CSV")
    return value


def _cell(value: str) -> str:
    # RFC 4180: quote fields containing comma, quote, CR, or LF; double quotes.
    # (csv.writer with a bare-LF terminator leaves a lone CR unquoted, which
    # would split the row on read, so quoting is done by hand.)
    if any(ch in value for ch in ',"\r\n'):
        return '"' + value.replace('"', '""') + '"'
    return value


def _render_csv(header: list[str], rows: list[list[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_cell(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def save_snapshot(snapshot: RepoSnapshot, directory: str | Path) -> None:
    """Write one snapshot into `directory` (created if needed).

    Deterministic: records are written in snapshot order, so saving the
    same snapshot twice yields byte-identical files.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    issue_rows = []
    for issue in snapshot.issues:
        where = f"issue {issue.number}"
        issue_rows.append(
            [
                str(issue.number),
                _check_writable_text(issue.title, where),
                issue.state,
                format_utc(issue.created_at),
                format_utc(issue.closed_at) if issue.closed_at else "",
                _check_writable_text(issue.creator, where),
                _check_writable_text(issue.closed_by or "", where),
                _pack_assignees(issue.assignees),
                _pack_labels(issue.labels),
            ]
        )

    commit_rows = []
    file_rows = []
    for commit in snapshot.commits:
        where = f"commit {commit.sha[:12]}"
        commit_rows.append(
            [
                commit.sha,
                _check_writable_text(commit.author, where),
                format_utc(commit.committed_at),
                _check_writable_text(commit.message, where),
                "true" if commit.stats_missing else "false",
            ]
        )
        for change in commit.files:
            file_rows.append(
                [
                    commit.sha,
                    _check_writable_text(change.path, where),
                    str(change.additions),
                    str(change.deletions),
                    str(change.changes),
                ]
            )

    meta = {
        "owner": snapshot.repo.owner,
        "name": snapshot.repo.name,
        "snapshot_time": format_utc(snapshot.snapshot_time),
        "schema_version": snapshot.schema_version,
    }

    (directory / "meta.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    (directory / "issues.csv").write_text(
        _render_csv(ISSUES_HEADER, issue_rows), encoding="utf-8", newline=""
    )
    (directory / "commits.csv").write_text(
        _render_csv(COMMITS_HEADER, commit_rows), encoding="utf-8", newline=""
    )
    (directory / "files.csv").write_text(
        _render_csv(FILES_HEADER, file_rows), encoding="utf-8", newline=""
    )


def _read_rows(path: Path, header: list[str]) -> list[list[str]]:
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            actual = next(reader)
        except StopIteration:
            raise InvariantViolation(
                [Violation(path.name, "header", "file is empty")]
            ) from None
        if actual != header:
            raise InvariantViolation(
                [Violation(path.name, "header", f"expected {header}, got {actual}")]
            )
        rows = []
        for row in reader:
            if len(row) != len(header):
                raise InvariantViolation(
                    [Violation(f"{path.name} row {reader.line_num}", "column count")]
                )
            rows.append(row)
        return rows


def _parse_int(cell: str, where: str, column: str) -> int:
    try:
        return int(cell)
    except ValueError:
        raise InvariantViolation(
            [Violation(where, f"malformed {column}", cell)]
        ) from None


def _parse_time(cell: str, where: str, column: str):
    try:
        return parse_utc(cell)
    except ValueError:
        raise InvariantViolation(
            [Violation(where, f"malformed {column}", cell)]
        ) from None


def load_snapshot(directory: str | Path) -> RepoSnapshot:
    """Load a snapshot directory, validating every invariant on the way in."""
    directory = Path(directory)
    for filename in SNAPSHOT_FILES:
        if not (directory / filename).is_file():
            raise MissingFileError(f"{directory / filename} is missing")

    try:
        meta = json.loads((directory / "meta.json").read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvariantViolation([Violation("meta.json", "json syntax", str(exc))])
    version = meta.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionMismatch(
            f"snapshot schema_version {version!r} is not supported "
            f"(expected {SCHEMA_VERSION})"
        )
    for key in ("owner", "name", "snapshot_time"):
        if key not in meta:
            raise InvariantViolation([Violation("meta.json", "missing key", key)])

    issues = []
    for idx, row in enumerate(_read_rows(directory / "issues.csv", ISSUES_HEADER)):
        where = f"issues.csv row {idx + 2}"
        number = _parse_int(row[0], where, "number")
        state = row[2]
        issues.append(
            IssueRecord(
                number=number,
                title=row[1],
                state=state,
                created_at=_parse_time(row[3], where, "created_at"),
                closed_at=_parse_time(row[4], where, "closed_at") if row[4] else None,
                creator=row[5],
                closed_by=row[6] or None,
                assignees=_unpack_assignees(row[7]),
                labels=_unpack_labels(row[8], where),
            )
        )

    files_by_sha: dict[str, list[FileChange]] = {}
    for idx, row in enumerate(_read_rows(directory / "files.csv", FILES_HEADER)):
        where = f"files.csv row {idx + 2}"
        files_by_sha.setdefault(row[0], []).append(
            FileChange(
                path=row[1],
                additions=_parse_int(row[2], where, "additions"),
                deletions=_parse_int(row[3], where, "deletions"),
                changes=_parse_int(row[4], where, "changes"),
            )
        )

    commits = []
    for idx, row in enumerate(_read_rows(directory / "commits.csv", COMMITS_HEADER)):
        where = f"commits.csv row {idx + 2}"
        if row[4] not in ("true", "false"):
            raise InvariantViolation([Violation(where, "malformed stats_missing", row[4])])
        commits.append(
            CommitRecord(
                sha=row[0],
                author=row[1],
                committed_at=_parse_time(row[2], where, "committed_at"),
                message=row[3],
                files=tuple(files_by_sha.pop(row[0], [])),
                stats_missing=row[4] == "true",
            )
        )
    if files_by_sha:
        orphan = next(iter(files_by_sha))
        raise InvariantViolation(
            [Violation(f"files.csv sha {orphan[:12]}", "unknown commit sha")]
        )

    snapshot = RepoSnapshot(
        repo=RepoRef(meta["owner"], meta["name"]),
        snapshot_time=_parse_time(meta["snapshot_time"], "meta.json", "snapshot_time"),
        issues=tuple(issues),
        commits=tuple(commits),
        schema_version=version,
    )
    violations = validate_snapshot(snapshot)
    if violations:
        raise InvariantViolation(violations)
    return snapshot
