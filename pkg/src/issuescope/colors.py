"""Chart color configuration.

Defaults live in palette.json next to this module: issue status colors
(purple open / green closed, matching GitHub's scheme), the steelblue
"no label" fallback, a ColorBrewer Set2 qualitative palette for donut
wedges and graph node kinds, and the GitHub-insights green for histogram
bars. Callers may load an alternative palette file with the same keys.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path


def load_palette(path: str | Path | None = None) -> dict:
    """Load the palette config; default is the packaged palette.json."""
    if path is not None:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    return json.loads(
        resources.files("issuescope").joinpath("palette.json").read_text("utf-8")
    )


_DEFAULT = load_palette()

STATUS_OPEN_COLOR: str = _DEFAULT["status_open"]
STATUS_CLOSED_COLOR: str = _DEFAULT["status_closed"]
NO_LABEL_COLOR: str = _DEFAULT["no_label"]
BUG_FIX_EDGE_COLOR: str = _DEFAULT["bug_fix_edge"]
HISTOGRAM_BAR_COLOR: str = _DEFAULT["histogram_bar"]
NODE_KIND_COLORS: dict[str, str] = dict(_DEFAULT["node_kinds"])
QUALITATIVE: list[str] = list(_DEFAULT["qualitative"])
