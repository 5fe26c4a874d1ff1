"""Pure analytics over a repository snapshot.

Everything here is a pure function of an immutable snapshot: issue
durations and rankings, timeline bars for the Gantt view, label census,
issue-to-commit correlation windows, bug-fix message detection, per-file
churn summaries with a top-N donut decomposition, and power-of-two
histogram binning. Safe for unlimited concurrent callers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from datetime import datetime

from .colors import NO_LABEL_COLOR, STATUS_CLOSED_COLOR, STATUS_OPEN_COLOR
from .records import CommitRecord, IssueRecord, RepoSnapshot

SECONDS_PER_DAY = 86400.0

OTHERS = "OTHERS"

_TOKEN_RE = re.compile(r"[0-9a-z]+")


@dataclass(frozen=True)
class TooltipPayload:
    """Hover payload mirroring the source issue exactly."""

    title: str
    created_at: datetime
    closed_at: datetime | None
    labels: tuple[str, ...]


@dataclass(frozen=True)
class ColorSegment:
    color: str
    label_name: str


@dataclass(frozen=True)
class TimelineBar:
    """One Gantt bar; width encodes how long the issue has been open."""

    issue_number: int
    title: str
    start: datetime
    end: datetime
    ongoing: bool
    duration_days: float
    segments: tuple[ColorSegment, ...]
    tooltip: TooltipPayload


@dataclass(frozen=True)
class BinRange:
    """Half-open [lower, upper) bin with power-of-two bounds."""

    lower: int
    upper: int

    @property
    def token(self) -> str:
        return f"{self.lower}-{self.upper}"

    @classmethod
    def parse(cls, token: str) -> "BinRange":
        lower_s, sep, upper_s = token.partition("-")
        if not sep:
            raise ValueError(f"expected L-U, got {token!r}")
        lower, upper = int(lower_s), int(upper_s)
        if lower < 1 or upper <= lower:
            raise ValueError(f"invalid bin range {token!r}")
        return cls(lower, upper)

    def contains(self, value: int) -> bool:
        return self.lower <= value < self.upper


@dataclass(frozen=True)
class HistogramBin:
    range: BinRange
    file_count: int


@dataclass(frozen=True)
class FileUpdateSummary:
    """Top-N most-updated files plus an OTHERS aggregate of the rest."""

    segments: tuple[tuple[str, int], ...]
    total: int
    bug_only: bool
    excluded: frozenset[str]
    bin_filter: BinRange | None


@dataclass(frozen=True)
class DonutWedge:
    name: str
    value: int
    start_angle: float  # radians from 12 o'clock, clockwise
    end_angle: float
    color: str


class ZeroTotal(ValueError):
    """Donut geometry is undefined when the summary total is zero."""


def issue_duration(issue: IssueRecord, snapshot_time: datetime) -> float:
    """Days an issue was (or has been) open; fractional days allowed."""
    end = issue.closed_at if issue.closed_at is not None else snapshot_time
    return (end - issue.created_at).total_seconds() / SECONDS_PER_DAY


def rank_issues(
    snapshot: RepoSnapshot, which: str
) -> list[tuple[IssueRecord, float]]:
    """Rank issues by duration, longest first; ties go to the lower number.

    `which` selects the population: "longest_open" ranks open issues by
    time open so far, "longest_closed" ranks closed issues by resolution
    time.
    """
    if which not in ("longest_open", "longest_closed"):
        raise ValueError(f"unknown ranking {which!r}")
    want_open = which == "longest_open"
    ranked = [
        (issue, issue_duration(issue, snapshot.snapshot_time))
        for issue in snapshot.issues
        if issue.is_open == want_open
    ]
    ranked.sort(key=lambda pair: (-pair[1], pair[0].number))
    return ranked


def _label_segments(issue: IssueRecord) -> tuple[ColorSegment, ...]:
    if not issue.labels:
        return (ColorSegment(NO_LABEL_COLOR, "no label"),)
    return tuple(ColorSegment(label.color, label.name) for label in issue.labels)


def build_timeline(snapshot: RepoSnapshot, mode: str = "status") -> list[TimelineBar]:
    """One bar per issue, sorted by creation time.

    Status mode gives a single purple/green segment; labels mode gives one
    segment per label in label order (steelblue "no label" when unlabeled).
    Open issues are flagged ongoing and end at the snapshot time, which is
    what the arrow glyph keys off when rendering.
    """
    if mode not in ("status", "labels"):
        raise ValueError(f"unknown timeline mode {mode!r}")
    bars = []
    for issue in sorted(snapshot.issues, key=lambda i: (i.created_at, i.number)):
        end = issue.closed_at if issue.closed_at is not None else snapshot.snapshot_time
        if mode == "status":
            color = STATUS_OPEN_COLOR if issue.is_open else STATUS_CLOSED_COLOR
            segments: tuple[ColorSegment, ...] = (ColorSegment(color, "status"),)
        else:
            segments = _label_segments(issue)
        bars.append(
            TimelineBar(
                issue_number=issue.number,
                title=issue.title,
                start=issue.created_at,
                end=end,
                ongoing=issue.is_open,
                duration_days=issue_duration(issue, snapshot.snapshot_time),
                segments=segments,
                tooltip=TooltipPayload(
                    title=issue.title,
                    created_at=issue.created_at,
                    closed_at=issue.closed_at,
                    labels=tuple(label.name for label in issue.labels),
                ),
            )
        )
    return bars


def label_census(snapshot: RepoSnapshot) -> dict[str, int]:
    """Count issues per distinct label; unlabeled issues count as "no label"."""
    census: dict[str, int] = {}
    for issue in snapshot.issues:
        names = {label.name for label in issue.labels} or {"no label"}
        for name in names:
            census[name] = census.get(name, 0) + 1
    return census


def correlation_window(
    issue: IssueRecord, snapshot_time: datetime
) -> tuple[datetime, datetime]:
    """[opened, closed-or-snapshot] interval used to attribute commits."""
    end = issue.closed_at if issue.closed_at is not None else snapshot_time
    return issue.created_at, end


def correlate_commits(
    issue: IssueRecord, snapshot: RepoSnapshot
) -> list[CommitRecord]:
    """Commits inside the issue's correlation window, oldest first.

    Both window boundaries are inclusive: a commit at the closing instant
    is plausibly the fix.
    """
    start, end = correlation_window(issue, snapshot.snapshot_time)
    hits = [c for c in snapshot.commits if start <= c.committed_at <= end]
    hits.sort(key=lambda c: (c.committed_at, c.sha))
    return hits


def detect_bug_fix(message: str) -> bool:
    """True iff any token of the lowercased message starts with "fix".

    Tokens are maximal alphanumeric runs, so "fix:", "Fixed", and
    "fixes(#12)" match while "prefix" and "hotfix" do not.
    """
    return any(tok.startswith("fix") for tok in _TOKEN_RE.findall(message.lower()))


def file_update_totals(
    snapshot: RepoSnapshot, bug_only: bool = False
) -> dict[str, int]:
    """Per-path updated-line totals (additions + deletions) across commits.

    With bug_only, only commits whose message passes detect_bug_fix count.
    Paths whose total is zero are dropped; they carry no churn signal.
    """
    totals: dict[str, int] = {}
    for commit in snapshot.commits:
        if bug_only and not detect_bug_fix(commit.message):
            continue
        for change in commit.files:
            totals[change.path] = totals.get(change.path, 0) + change.changes
    return {path: total for path, total in totals.items() if total > 0}


def summarize_file_updates(
    snapshot: RepoSnapshot,
    top_n: int = 5,
    bug_only: bool = False,
    excluded: frozenset[str] | set[str] = frozenset(),
    bin_filter: BinRange | None = None,
) -> FileUpdateSummary:
    """Top files by updated lines, with everything else folded into OTHERS.

    Filters apply in order: bug_only restricts the commit set, excluded
    removes specific paths, bin_filter keeps only paths whose total lies
    in the half-open range. Ties in the ranking break lexicographically.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    totals = file_update_totals(snapshot, bug_only=bug_only)
    filtered = {
        path: total
        for path, total in totals.items()
        if path not in excluded
        and (bin_filter is None or bin_filter.contains(total))
    }
    ranked = sorted(filtered.items(), key=lambda item: (-item[1], item[0]))
    named = ranked[:top_n]
    rest = ranked[top_n:]
    segments = list(named)
    if rest:
        segments.append((OTHERS, sum(total for _, total in rest)))
    return FileUpdateSummary(
        segments=tuple(segments),
        total=sum(filtered.values()),
        bug_only=bug_only,
        excluded=frozenset(excluded),
        bin_filter=bin_filter,
    )


def compute_histogram(
    snapshot: RepoSnapshot, bug_only: bool = False
) -> list[HistogramBin]:
    """File counts per power-of-two updated-lines bin [2^k, 2^(k+1)).

    Bins run from the first to the last non-empty bin; interior empty bins
    are kept with count zero so the log axis stays contiguous.
    """
    totals = file_update_totals(snapshot, bug_only=bug_only)
    if not totals:
        return []
    counts: dict[int, int] = {}
    for total in totals.values():
        k = total.bit_length() - 1  # 2^k <= total < 2^(k+1)
        counts[k] = counts.get(k, 0) + 1
    lo = min(counts)
    hi = max(counts)
    return [
        HistogramBin(BinRange(2**k, 2 ** (k + 1)), counts.get(k, 0))
        for k in range(lo, hi + 1)
    ]


def donut_geometry(
    summary: FileUpdateSummary, palette: list[str]
) -> list[DonutWedge]:
    """Contiguous wedges starting at 12 o'clock, clockwise.

    Angle spans are proportional to segment values; colors come from the
    palette in order, except OTHERS, which always takes the final palette
    color.
    """
    if summary.total <= 0:
        raise ZeroTotal("no updated lines to draw")
    if len(palette) < len(summary.segments):
        raise ValueError(
            f"palette has {len(palette)} colors for {len(summary.segments)} segments"
        )
    wedges = []
    cursor = 0.0
    cumulative = 0
    for index, (name, value) in enumerate(summary.segments):
        cumulative += value
        end = 2.0 * math.pi * cumulative / summary.total
        color = palette[-1] if name == OTHERS else palette[index]
        wedges.append(DonutWedge(name, value, cursor, end, color))
        cursor = end
    return wedges
