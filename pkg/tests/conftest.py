from __future__ import annotations

from pathlib import Path

import pytest

from paper_fixtures import freecodecamp_snapshot, hyprland_snapshot, javascript_snapshot

FIXTURES_DIR = Path(__file__).parent / "fixtures"
SNAPSHOTS_DIR = FIXTURES_DIR / "snapshots"


@pytest.fixture(scope="session")
def fcc_snapshot():
    return freecodecamp_snapshot()


@pytest.fixture(scope="session")
def hyprland_snap():
    return hyprland_snapshot()


@pytest.fixture(scope="session")
def javascript_snap():
    return javascript_snapshot()


@pytest.fixture(scope="session")
def committed_data_dir() -> Path:
    """The committed snapshot directories the acceptance suite runs against."""
    assert SNAPSHOTS_DIR.is_dir(), "committed fixture snapshots are missing"
    return SNAPSHOTS_DIR
