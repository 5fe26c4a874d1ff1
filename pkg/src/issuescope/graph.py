"""Typed node/edge graph for one issue.

Nodes cover the issue itself, the people around it (creator, assignees,
closer, commit authors — deduplicated by login), the commits inside its
correlation window, and the files those commits touched (deduplicated by
path). Edges carry a kind, and issue-to-commit edges are flagged bug_fix
when the commit message looks like a fix, which the views render red.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .analytics import correlate_commits, detect_bug_fix
from .colors import NODE_KIND_COLORS, STATUS_CLOSED_COLOR, STATUS_OPEN_COLOR
from .records import IssueRecord, RepoSnapshot


@dataclass(frozen=True)
class GraphNode:
    id: str
    kind: str  # issue | user | commit | file
    display: str
    color: str
    roles: frozenset[str] = frozenset()  # user nodes only


@dataclass(frozen=True)
class GraphEdge:
    source: str
    target: str
    kind: str  # created_by | assigned_to | closed_by | has_commit | authored_by | touches_file
    bug_fix: bool = False


@dataclass
class _UserPool:
    """Deduplicates user nodes by login while accumulating roles."""

    roles: dict[str, set[str]] = field(default_factory=dict)
    order: list[str] = field(default_factory=list)

    def add(self, login: str, role: str) -> str:
        if login not in self.roles:
            self.roles[login] = set()
            self.order.append(login)
        self.roles[login].add(role)
        return f"user:{login}"


DEMO_ASSIGNEE = "(demo assignee)"
DEMO_CLOSER = "(demo closer)"


def build_issue_graph(
    issue: IssueRecord, snapshot: RepoSnapshot, demo_nodes: bool = False
) -> tuple[list[GraphNode], list[GraphEdge]]:
    """Assemble the node/edge graph for one issue of the snapshot.

    With demo_nodes, placeholder assignee/closer nodes are added when the
    real data lacks them, mirroring the illustrative graphs a reader may
    have seen; by default only real data appears.
    """
    users = _UserPool()
    edges: list[GraphEdge] = []
    issue_id = f"issue:{issue.number}"

    edges.append(GraphEdge(issue_id, users.add(issue.creator, "creator"), "created_by"))
    for assignee in issue.assignees:
        edges.append(GraphEdge(issue_id, users.add(assignee, "assignee"), "assigned_to"))
    if issue.closed_by is not None:
        edges.append(GraphEdge(issue_id, users.add(issue.closed_by, "closer"), "closed_by"))
    if demo_nodes and not issue.assignees:
        edges.append(GraphEdge(issue_id, users.add(DEMO_ASSIGNEE, "assignee"), "assigned_to"))
    if demo_nodes and issue.closed_by is None:
        edges.append(GraphEdge(issue_id, users.add(DEMO_CLOSER, "closer"), "closed_by"))

    commits = correlate_commits(issue, snapshot)
    file_order: list[str] = []
    seen_files: set[str] = set()
    for commit in commits:
        commit_id = f"commit:{commit.sha}"
        edges.append(
            GraphEdge(issue_id, commit_id, "has_commit", bug_fix=detect_bug_fix(commit.message))
        )
        edges.append(GraphEdge(commit_id, users.add(commit.author, "author"), "authored_by"))
        for change in commit.files:
            if change.path not in seen_files:
                seen_files.add(change.path)
                file_order.append(change.path)
            edges.append(GraphEdge(commit_id, f"file:{change.path}", "touches_file"))

    nodes = [
        GraphNode(
            id=issue_id,
            kind="issue",
            display=issue.title,
            color=STATUS_OPEN_COLOR if issue.is_open else STATUS_CLOSED_COLOR,
        )
    ]
    nodes.extend(
        GraphNode(
            id=f"user:{login}",
            kind="user",
            display=login,
            color=NODE_KIND_COLORS["user"],
            roles=frozenset(users.roles[login]),
        )
        for login in users.order
    )
    nodes.extend(
        GraphNode(
            id=f"commit:{commit.sha}",
            kind="commit",
            display=commit.message,
            color=NODE_KIND_COLORS["commit"],
        )
        for commit in commits
    )
    nodes.extend(
        GraphNode(
            id=f"file:{path}",
            kind="file",
            display=path,
            color=NODE_KIND_COLORS["file"],
        )
        for path in file_order
    )
    return nodes, edges
