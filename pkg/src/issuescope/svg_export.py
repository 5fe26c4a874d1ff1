"""Static SVG renderings of the three dashboard views.

Output is byte-deterministic for a fixed snapshot and seed: text uses a
monospace font with a fixed size (no rasterized metrics), coordinates are
formatted to three decimals, and element order follows snapshot order.
"""

from __future__ import annotations

import math
from datetime import datetime, timedelta
from xml.sax.saxutils import escape

from .analytics import (
    build_timeline,
    compute_histogram,
    donut_geometry,
    summarize_file_updates,
)
from .colors import HISTOGRAM_BAR_COLOR, QUALITATIVE
from .graph import build_issue_graph
from .layout import LayoutParams, layout
from .records import RepoSnapshot

FONT = 'font-family="monospace" font-size="12"'

ROW_HEIGHT = 22
BAR_HEIGHT = 14
STRIPE_WIDTH = 8


def _f(value: float) -> str:
    return f"{value:.3f}"


def _svg(width: int, height: int, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _text(x: float, y: float, content: str, anchor: str = "start") -> str:
    return (
        f'<text x="{_f(x)}" y="{_f(y)}" {FONT} text-anchor="{anchor}">'
        f"{escape(content)}</text>"
    )


def render_timeline_svg(snapshot: RepoSnapshot, mode: str = "status") -> str:
    """Gantt chart: one bar per issue, stripes in label mode, arrows on open bars."""
    bars = build_timeline(snapshot, mode)
    width, left, right, top = 900, 90, 40, 40
    height = top + ROW_HEIGHT * max(len(bars), 1) + 30
    body = [f'<rect width="{width}" height="{height}" fill="white"/>']

    if not bars:
        body.append(_text(width / 2, height / 2, "no issues in snapshot", "middle"))
        return _svg(width, height, body)

    t_min = min(bar.start for bar in bars)
    t_max = max(bar.end for bar in bars)
    span = max((t_max - t_min).total_seconds(), 1.0)
    plot_w = width - left - right

    def x_of(when: datetime) -> float:
        return left + (when - t_min).total_seconds() / span * plot_w

    for i in range(5):
        tick_time = t_min + timedelta(seconds=span * i / 4)
        x = x_of(tick_time)
        body.append(
            f'<line x1="{_f(x)}" y1="{top - 6}" x2="{_f(x)}" y2="{height - 24}" '
            f'stroke="#dddddd"/>'
        )
        body.append(_text(x, height - 8, tick_time.strftime("%Y-%m-%d"), "middle"))

    for row, bar in enumerate(bars):
        y = top + row * ROW_HEIGHT
        y_mid = y + BAR_HEIGHT / 2
        x0 = x_of(bar.start)
        x1 = max(x_of(bar.end), x0 + 2.0)  # keep zero-duration issues visible
        body.append(_text(left - 6, y_mid + 4, f"#{bar.issue_number}", "end"))
        if len(bar.segments) == 1:
            body.append(
                f'<rect x="{_f(x0)}" y="{_f(y)}" width="{_f(x1 - x0)}" '
                f'height="{BAR_HEIGHT}" fill="#{bar.segments[0].color}">'
                f"<title>{escape(bar.title)}</title></rect>"
            )
        else:
            stripes = max(int(math.ceil((x1 - x0) / STRIPE_WIDTH)), len(bar.segments))
            for s in range(stripes):
                sx0 = x0 + (x1 - x0) * s / stripes
                sx1 = x0 + (x1 - x0) * (s + 1) / stripes
                color = bar.segments[s % len(bar.segments)].color
                body.append(
                    f'<rect x="{_f(sx0)}" y="{_f(y)}" width="{_f(sx1 - sx0)}" '
                    f'height="{BAR_HEIGHT}" fill="#{color}"/>'
                )
        if bar.ongoing:
            body.append(
                f'<polygon class="arrowhead" points="'
                f"{_f(x1)},{_f(y)} {_f(x1 + 9)},{_f(y_mid)} {_f(x1)},{_f(y + BAR_HEIGHT)}"
                f'" fill="#{bar.segments[-1].color}"/>'
            )
    return _svg(width, height, body)


def _donut_point(cx: float, cy: float, r: float, angle: float) -> tuple[float, float]:
    # Angle 0 is 12 o'clock; positive angles run clockwise on screen.
    return cx + r * math.sin(angle), cy - r * math.cos(angle)


def _wedge_path(cx, cy, r_outer, r_inner, a0, a1) -> str:
    parts = []
    mid = (a0 + a1) / 2  # split so no single arc exceeds half a turn
    ox0, oy0 = _donut_point(cx, cy, r_outer, a0)
    oxm, oym = _donut_point(cx, cy, r_outer, mid)
    ox1, oy1 = _donut_point(cx, cy, r_outer, a1)
    ix1, iy1 = _donut_point(cx, cy, r_inner, a1)
    ixm, iym = _donut_point(cx, cy, r_inner, mid)
    ix0, iy0 = _donut_point(cx, cy, r_inner, a0)
    parts.append(f"M {_f(ox0)} {_f(oy0)}")
    parts.append(f"A {_f(r_outer)} {_f(r_outer)} 0 0 1 {_f(oxm)} {_f(oym)}")
    parts.append(f"A {_f(r_outer)} {_f(r_outer)} 0 0 1 {_f(ox1)} {_f(oy1)}")
    parts.append(f"L {_f(ix1)} {_f(iy1)}")
    parts.append(f"A {_f(r_inner)} {_f(r_inner)} 0 0 0 {_f(ixm)} {_f(iym)}")
    parts.append(f"A {_f(r_inner)} {_f(r_inner)} 0 0 0 {_f(ix0)} {_f(iy0)}")
    parts.append("Z")
    return " ".join(parts)


def render_summary_svg(
    snapshot: RepoSnapshot, top_n: int = 5, bug_only: bool = False
) -> str:
    """Donut of top updated files plus the updated-lines histogram."""
    summary = summarize_file_updates(snapshot, top_n=top_n, bug_only=bug_only)
    bins = compute_histogram(snapshot, bug_only=bug_only)
    width, height = 900, 360
    body = [f'<rect width="{width}" height="{height}" fill="white"/>']
    cx, cy, r_outer, r_inner = 170.0, 170.0, 110.0, 65.0

    if summary.total == 0:
        body.append(_text(cx, cy, "no updated lines", "middle"))
    else:
        full_turn = 2.0 * math.pi - 1e-9
        for wedge in donut_geometry(summary, QUALITATIVE):
            a1 = min(wedge.end_angle, wedge.start_angle + full_turn)
            body.append(
                f'<path class="wedge" d="{_wedge_path(cx, cy, r_outer, r_inner, wedge.start_angle, a1)}" '
                f'fill="#{wedge.color}"><title>{escape(f"{wedge.name}: {wedge.value}")}</title></path>'
            )
        body.append(_text(cx, cy + 4, str(summary.total), "middle"))
        for i, (name, value) in enumerate(summary.segments):
            y = 40 + i * 18
            color = QUALITATIVE[-1] if name == "OTHERS" else QUALITATIVE[i]
            body.append(f'<rect x="320" y="{y - 10}" width="12" height="12" fill="#{color}"/>')
            body.append(_text(338, y, f"{name} ({value})"))

    hist_left, hist_top, bar_max_w = 560.0, 40.0, 260.0
    max_count = max((b.file_count for b in bins), default=0)
    for i, bucket in enumerate(bins):
        y = hist_top + i * 26
        w = bar_max_w * bucket.file_count / max_count if max_count else 0.0
        body.append(
            f'<rect class="hist-bar" x="{_f(hist_left)}" y="{_f(y)}" width="{_f(w)}" '
            f'height="18" fill="#{HISTOGRAM_BAR_COLOR}"/>'
        )
        body.append(_text(hist_left - 8, y + 13, bucket.range.token, "end"))
        body.append(_text(hist_left + w + 6, y + 13, str(bucket.file_count)))
    return _svg(width, height, body)


def render_graph_svg(
    snapshot: RepoSnapshot, number: int, seed: int = 42, demo_nodes: bool = False
) -> str:
    """Laid-out issue graph; bug-fix edges are drawn red."""
    issue = snapshot.issue(number)
    if issue is None:
        raise KeyError(f"issue {number} not in snapshot")
    nodes, edges = build_issue_graph(issue, snapshot, demo_nodes=demo_nodes)
    result = layout(nodes, edges, LayoutParams(seed=seed))

    width, height, margin = 720, 600, 50.0
    xs = [pos[0] for pos in result.positions.values()]
    ys = [pos[1] for pos in result.positions.values()]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    scale = min(
        (width - 2 * margin) / max(x_hi - x_lo, 1e-9),
        (height - 2 * margin) / max(y_hi - y_lo, 1e-9),
        1.0,
    )

    def at(node_id: str) -> tuple[float, float]:
        x, y = result.positions[node_id]
        return (
            width / 2 + (x - (x_lo + x_hi) / 2) * scale,
            height / 2 + (y - (y_lo + y_hi) / 2) * scale,
        )

    body = [f'<rect width="{width}" height="{height}" fill="white"/>']
    for edge in edges:
        (x1, y1), (x2, y2) = at(edge.source), at(edge.target)
        stroke = "#d73a4a" if edge.bug_fix else "#999999"
        stroke_w = "2.5" if edge.bug_fix else "1.5"
        body.append(
            f'<line class="edge-{edge.kind}" x1="{_f(x1)}" y1="{_f(y1)}" '
            f'x2="{_f(x2)}" y2="{_f(y2)}" stroke="{stroke}" stroke-width="{stroke_w}"/>'
        )
    for node in nodes:
        x, y = at(node.id)
        radius = 16 if node.kind == "issue" else 9
        body.append(
            f'<circle class="node-{node.kind}" cx="{_f(x)}" cy="{_f(y)}" r="{radius}" '
            f'fill="#{node.color}" stroke="#333333">'
            f"<title>{escape(node.display)}</title></circle>"
        )
    legend = [("issue", nodes[0].color)] + [
        (kind, color)
        for kind, color in sorted(
            {(n.kind, n.color) for n in nodes if n.kind != "issue"}
        )
    ]
    for i, (kind, color) in enumerate(legend):
        y = 24 + i * 18
        body.append(f'<circle cx="20" cy="{y - 4}" r="6" fill="#{color}"/>')
        body.append(_text(32, y, kind))
    return _svg(width, height, body)
