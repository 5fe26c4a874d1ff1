"""Operator command line: fetch snapshots, answer analysis questions,
export static charts, and launch the API server.

Exit codes: 0 success, 2 fetch/usage errors, 3 write or data-directory
failures, 4 unknown question or invalid view, 5 unanswerable question,
6 serve port in use. Results go to stdout, diagnostics to stderr, and
every command accepts --format json with stable field names.
"""

from __future__ import annotations

import argparse
import json
import os
import shutil
import signal
import socket
import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .analytics import (
    correlate_commits,
    detect_bug_fix,
    label_census,
    rank_issues,
    summarize_file_updates,
)
from .github_client import FetchConfig, GitHubApiError, fetch_commits, fetch_issues
from .records import RepoRef, RepoSnapshot, format_utc
from .snapshot_store import SnapshotStoreError, load_snapshot, save_snapshot

EXIT_OK = 0
EXIT_FETCH = 2
EXIT_WRITE = 3
EXIT_BAD_REQUEST = 4
EXIT_UNANSWERABLE = 5
EXIT_PORT_IN_USE = 6

QUESTIONS = (
    "longest-closed",
    "longest-open",
    "label-majority",
    "longest-bug",
    "top-file",
    "top-file-bugfix",
)

COMMIT_SCOPE_MARGIN = timedelta(days=1)


def _err(message: str) -> None:
    print(message, file=sys.stderr)


def _emit(payload: dict, fmt: str, text: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _load_data(path: str) -> RepoSnapshot | None:
    try:
        return load_snapshot(path)
    except (SnapshotStoreError, OSError) as exc:
        _err(f"cannot load snapshot from {path}: {exc}")
        return None


def cmd_fetch(args: argparse.Namespace) -> int:
    try:
        repo = RepoRef.parse(args.repo)
    except ValueError as exc:
        _err(f"invalid --repo: {exc}")
        return EXIT_FETCH
    cfg = FetchConfig(max_issues=args.max_issues)
    try:
        issues = fetch_issues(repo, cfg)
        if issues:
            since = min(i.created_at for i in issues) - COMMIT_SCOPE_MARGIN
        else:
            since = datetime.now(timezone.utc) - COMMIT_SCOPE_MARGIN
        commits = fetch_commits(repo, since, cfg)
    except GitHubApiError as exc:
        _err(f"fetch failed: {type(exc).__name__}: {exc}")
        return EXIT_FETCH

    now = datetime.now(timezone.utc).replace(microsecond=0)
    stamps = [i.created_at for i in issues] + [c.committed_at for c in commits]
    stamps += [i.closed_at for i in issues if i.closed_at]
    snapshot_time = max([now, *stamps])  # guard against clock skew
    snapshot = RepoSnapshot(repo, snapshot_time, tuple(issues), tuple(commits))

    out = Path(args.out)
    staging = out.parent / f".{out.name}.staging"
    retired = out.parent / f".{out.name}.retired"
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        if staging.exists():
            shutil.rmtree(staging)
        save_snapshot(snapshot, staging)
        if retired.exists():
            shutil.rmtree(retired)
        if out.exists():
            os.replace(out, retired)
        os.replace(staging, out)
        if retired.exists():
            shutil.rmtree(retired)
    except OSError as exc:
        _err(f"write failed: {exc}")
        return EXIT_WRITE

    _emit(
        {
            "owner": repo.owner,
            "name": repo.name,
            "issues": len(issues),
            "commits": len(commits),
            "snapshot_time": format_utc(snapshot_time),
            "out": str(out),
        },
        args.format,
        f"{repo}: {len(issues)} issues, {len(commits)} commits, "
        f"snapshot {format_utc(snapshot_time)} -> {out}",
    )
    return EXIT_OK


def _answer_ranked(snapshot: RepoSnapshot, which: str, question: str) -> tuple[dict, str] | None:
    ranked = rank_issues(snapshot, which)
    if not ranked:
        return None
    issue, duration = ranked[0]
    payload = {
        "question": question,
        "issue_number": issue.number,
        "title": issue.title,
        "duration_days": round(duration, 4),
        "opened_by": issue.creator,
    }
    text = f"#{issue.number} {issue.title!r}: {duration:g} days (opened by {issue.creator}"
    if which == "longest_closed":
        payload["closed_by"] = issue.closed_by
        text += f", closed by {issue.closed_by}"
    return payload, text + ")"


def cmd_analyze(args: argparse.Namespace) -> int:
    if args.question not in QUESTIONS:
        _err(f"unknown question {args.question!r}; expected one of {', '.join(QUESTIONS)}")
        return EXIT_BAD_REQUEST
    snapshot = _load_data(args.data)
    if snapshot is None:
        return EXIT_WRITE

    q = args.question
    if q in ("longest-closed", "longest-open"):
        which = "longest_closed" if q == "longest-closed" else "longest_open"
        answer = _answer_ranked(snapshot, which, q)
        if answer is None:
            _err(f"no {'closed' if which == 'longest_closed' else 'open'} issues in snapshot")
            return EXIT_UNANSWERABLE
        _emit(answer[0], args.format, answer[1])
        return EXIT_OK

    if q == "label-majority":
        census = label_census(snapshot)
        if not census:
            _err("no issues in snapshot")
            return EXIT_UNANSWERABLE
        label, count = max(census.items(), key=lambda kv: (kv[1], kv[0]))
        _emit(
            {"question": q, "label": label, "issue_count": count},
            args.format,
            f"{label!r}: {count} issues",
        )
        return EXIT_OK

    if q == "longest-bug":
        bug_closed = [
            (issue, duration)
            for issue, duration in rank_issues(snapshot, "longest_closed")
            if any("bug" in label.name.lower() for label in issue.labels)
        ]
        if not bug_closed:
            _err("no closed bug-labeled issues in snapshot")
            return EXIT_UNANSWERABLE
        issue, duration = bug_closed[0]
        candidates = [
            c for c in correlate_commits(issue, snapshot) if detect_bug_fix(c.message)
        ]
        payload = {
            "question": q,
            "issue_number": issue.number,
            "title": issue.title,
            "duration_days": round(duration, 4),
            "opened_by": issue.creator,
            "closed_by": issue.closed_by,
            "candidate_commits": [
                {"sha": c.sha, "message": c.message} for c in candidates
            ],
        }
        text = (
            f"#{issue.number} {issue.title!r}: {duration:g} days "
            f"(opened by {issue.creator}, closed by {issue.closed_by}); "
            f"{len(candidates)} fix-keyword commits in window"
        )
        _emit(payload, args.format, text)
        return EXIT_OK

    # top-file / top-file-bugfix
    summary = summarize_file_updates(snapshot, top_n=1, bug_only=q == "top-file-bugfix")
    named = [seg for seg in summary.segments if seg[0] != "OTHERS"]
    if not named:
        _err("no updated files match")
        return EXIT_UNANSWERABLE
    path, lines = named[0]
    _emit(
        {"question": q, "path": path, "updated_lines": lines},
        args.format,
        f"{path}: {lines} updated lines",
    )
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    from . import payloads, svg_export  # heavier imports stay off the fast path

    view = args.view
    seed = args.seed
    issue_number: int | None = None
    if view.startswith("graph:"):
        try:
            issue_number = int(view.split(":", 1)[1])
        except ValueError:
            _err(f"invalid view {view!r}: graph:N needs an integer issue number")
            return EXIT_BAD_REQUEST
        view = "graph"
    if view not in ("timeline", "summary", "graph"):
        _err(f"invalid view {args.view!r}; expected timeline, summary, or graph:N")
        return EXIT_BAD_REQUEST

    snapshot = _load_data(args.data)
    if snapshot is None:
        return EXIT_WRITE

    if view == "graph":
        issue = snapshot.issue(issue_number)
        if issue is None:
            _err(f"issue {issue_number} not in snapshot")
            return EXIT_BAD_REQUEST
        if args.format == "json":
            content = json.dumps(
                payloads.graph_payload(snapshot, issue, seed=seed, demo_nodes=args.demo_nodes),
                indent=2,
            ) + "\n"
        else:
            content = svg_export.render_graph_svg(
                snapshot, issue_number, seed=seed, demo_nodes=args.demo_nodes
            )
    elif view == "timeline":
        if args.format == "json":
            content = json.dumps(payloads.timeline_payload(snapshot, args.mode), indent=2) + "\n"
        else:
            content = svg_export.render_timeline_svg(snapshot, args.mode)
    else:
        if args.format == "json":
            content = json.dumps(
                payloads.summary_payload(snapshot, bug_only=args.bug_only), indent=2
            ) + "\n"
        else:
            content = svg_export.render_summary_svg(snapshot, bug_only=args.bug_only)

    try:
        Path(args.out).write_bytes(content.encode("utf-8"))
    except OSError as exc:
        _err(f"write failed: {exc}")
        return EXIT_WRITE
    _err(f"wrote {args.out}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import ServerConfig, create_app

    data_dir = os.environ.get("ISSUESCOPE_DATA") or args.data
    if not Path(data_dir).is_dir():
        _err(f"data directory {data_dir} does not exist")
        return EXIT_WRITE

    host, _, port_s = args.bind.rpartition(":")
    try:
        port = int(port_s)
    except ValueError:
        _err(f"invalid --bind {args.bind!r}; expected host:port")
        return EXIT_FETCH
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host or "127.0.0.1", port))
    except OSError as exc:
        sock.close()
        _err(f"cannot bind {args.bind}: {exc}")
        return EXIT_PORT_IN_USE
    bound_host, bound_port = sock.getsockname()[:2]

    app = create_app(ServerConfig(data_dir=data_dir, static_dir=args.static))
    if hasattr(signal, "SIGHUP"):  # reload snapshots without restarting
        signal.signal(signal.SIGHUP, lambda *_: app.state.snapshots.reload())

    print(f"serving on http://{bound_host}:{bound_port}", flush=True)
    sock.listen(128)
    server = uvicorn.Server(uvicorn.Config(app, log_level="warning", lifespan="off"))
    server.run(sockets=[sock])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="issuescope",
        description="Snapshot GitHub issues/commits and explore the analytics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fetch = sub.add_parser("fetch", help="fetch a repository snapshot from GitHub")
    p_fetch.add_argument("--repo", required=True, metavar="OWNER/NAME")
    p_fetch.add_argument("--max-issues", type=int, default=100)
    p_fetch.add_argument("--out", required=True, metavar="DIR")
    p_fetch.add_argument("--format", choices=("text", "json"), default="text")
    p_fetch.set_defaults(func=cmd_fetch)

    p_analyze = sub.add_parser("analyze", help="answer an analysis question")
    p_analyze.add_argument("--data", required=True, metavar="DIR")
    p_analyze.add_argument("--question", required=True, metavar="Q")
    p_analyze.add_argument("--format", choices=("text", "json"), default="text")
    p_analyze.set_defaults(func=cmd_analyze)

    p_export = sub.add_parser("export", help="export a view as SVG or JSON")
    p_export.add_argument("--data", required=True, metavar="DIR")
    p_export.add_argument("--view", required=True, metavar="timeline|summary|graph:N")
    p_export.add_argument("--format", choices=("svg", "json"), default="svg")
    p_export.add_argument("--out", required=True, metavar="FILE")
    p_export.add_argument("--mode", choices=("status", "labels"), default="status")
    p_export.add_argument("--seed", type=int, default=42)
    p_export.add_argument("--bug-only", action="store_true")
    p_export.add_argument("--demo-nodes", action="store_true")
    p_export.set_defaults(func=cmd_export)

    p_serve = sub.add_parser("serve", help="serve snapshots over HTTP")
    p_serve.add_argument("--data", required=True, metavar="DIR")
    p_serve.add_argument("--bind", default="127.0.0.1:8000", metavar="HOST:PORT")
    p_serve.add_argument("--static", default=None, metavar="DIR")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
