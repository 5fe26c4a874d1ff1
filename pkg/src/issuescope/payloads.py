"""JSON payload builders shared by the HTTP API and the CLI exporter.

Keeping these in one place guarantees that `issuescope export --format
json` writes exactly what the server would serve.
"""

from __future__ import annotations

from .analytics import (
    BinRange,
    build_timeline,
    compute_histogram,
    donut_geometry,
    summarize_file_updates,
)
from .colors import NO_LABEL_COLOR, QUALITATIVE, STATUS_CLOSED_COLOR, STATUS_OPEN_COLOR
from .graph import build_issue_graph
from .layout import LayoutParams, layout
from .records import IssueRecord, RepoSnapshot, format_utc


def repo_entry(snapshot: RepoSnapshot) -> dict:
    return {
        "owner": snapshot.repo.owner,
        "name": snapshot.repo.name,
        "snapshot_time": format_utc(snapshot.snapshot_time),
    }


def _timeline_legend(snapshot: RepoSnapshot, mode: str) -> list[dict]:
    if mode == "status":
        return [
            {"name": "open", "color": STATUS_OPEN_COLOR},
            {"name": "closed", "color": STATUS_CLOSED_COLOR},
        ]
    seen: dict[str, str] = {}
    any_unlabeled = False
    for issue in snapshot.issues:
        if not issue.labels:
            any_unlabeled = True
        for label in issue.labels:
            seen.setdefault(label.name, label.color)
    legend = [{"name": name, "color": seen[name]} for name in sorted(seen)]
    if any_unlabeled:
        legend.append({"name": "no label", "color": NO_LABEL_COLOR})
    return legend


def timeline_payload(snapshot: RepoSnapshot, mode: str = "status") -> dict:
    bars = build_timeline(snapshot, mode)
    return {
        "mode": mode,
        "bars": [
            {
                "issue_number": bar.issue_number,
                "title": bar.title,
                "start": format_utc(bar.start),
                "end": format_utc(bar.end),
                "ongoing": bar.ongoing,
                "duration_days": bar.duration_days,
                "segments": [
                    {"color": seg.color, "label_name": seg.label_name}
                    for seg in bar.segments
                ],
                "tooltip": {
                    "title": bar.tooltip.title,
                    "created_at": format_utc(bar.tooltip.created_at),
                    "closed_at": (
                        format_utc(bar.tooltip.closed_at)
                        if bar.tooltip.closed_at
                        else None
                    ),
                    "labels": list(bar.tooltip.labels),
                },
            }
            for bar in bars
        ],
        "legend": _timeline_legend(snapshot, mode),
    }


def graph_payload(
    snapshot: RepoSnapshot,
    issue: IssueRecord,
    seed: int = 42,
    demo_nodes: bool = False,
) -> dict:
    nodes, edges = build_issue_graph(issue, snapshot, demo_nodes=demo_nodes)
    result = layout(nodes, edges, LayoutParams(seed=seed))
    return {
        "nodes": [
            {
                "id": node.id,
                "kind": node.kind,
                "display": node.display,
                "color": node.color,
                "roles": sorted(node.roles),
                "x": result.positions[node.id][0],
                "y": result.positions[node.id][1],
            }
            for node in nodes
        ],
        "edges": [
            {
                "source": edge.source,
                "target": edge.target,
                "kind": edge.kind,
                "bug_fix": edge.bug_fix,
            }
            for edge in edges
        ],
        "meta": {"seed": seed, "iterations": result.iterations},
    }


def summary_payload(
    snapshot: RepoSnapshot,
    top_n: int = 5,
    bug_only: bool = False,
    excluded: frozenset[str] | set[str] = frozenset(),
    bin_filter: BinRange | None = None,
) -> dict:
    summary = summarize_file_updates(
        snapshot, top_n=top_n, bug_only=bug_only, excluded=excluded, bin_filter=bin_filter
    )
    if summary.total == 0:
        return {"wedges": [], "total": 0}
    wedges = donut_geometry(summary, QUALITATIVE)
    return {
        "wedges": [
            {
                "name": w.name,
                "value": w.value,
                "start_angle": w.start_angle,
                "end_angle": w.end_angle,
                "color": w.color,
            }
            for w in wedges
        ],
        "total": summary.total,
    }


def histogram_payload(snapshot: RepoSnapshot, bug_only: bool = False) -> list[dict]:
    return [
        {
            "lower": b.range.lower,
            "upper": b.range.upper,
            "token": b.range.token,
            "file_count": b.file_count,
        }
        for b in compute_histogram(snapshot, bug_only=bug_only)
    ]
