"""Acceptance suite: one test per release criterion, each printing a
PASS line with its runtime. Run with `pytest tests/test_acceptance.py -v -s`.

The fixture-fidelity criteria run against the committed snapshot
directories under tests/fixtures/snapshots, not the in-memory builders,
so the on-disk artifacts are what is actually certified.
"""

import json
import math
import random
import time
from contextlib import contextmanager
from dataclasses import replace
from datetime import datetime, timedelta, timezone
from pathlib import Path

import httpx
import jsonschema
import numpy as np
import pytest
from fastapi.testclient import TestClient

import issuescope.cli as cli
from issuescope.analytics import (
    compute_histogram,
    correlate_commits,
    detect_bug_fix,
    donut_geometry,
    file_update_totals,
    label_census,
    rank_issues,
    summarize_file_updates,
)
from issuescope.colors import QUALITATIVE
from issuescope.github_client import FetchConfig, fetch_issues
from issuescope.layout import LayoutParams, initialize, layout, layout_step
from issuescope.records import RepoRef
from issuescope.server import ServerConfig, create_app
from issuescope.snapshot_store import load_snapshot, save_snapshot
from snapshot_gen import random_graph, random_snapshot

UTC = timezone.utc
FIXTURES = Path(__file__).parent / "fixtures"
SCHEMAS = Path(__file__).parent.parent / "src" / "issuescope" / "schemas"


@contextmanager
def criterion(name: str, budget_seconds: float | None = None):
    started = time.monotonic()
    yield
    elapsed = time.monotonic() - started
    line = f"ACCEPTANCE {name}: PASS ({elapsed:.2f}s)"
    if budget_seconds is not None:
        assert elapsed < budget_seconds, (
            f"{name} took {elapsed:.2f}s, budget {budget_seconds}s"
        )
        line += f" [budget {budget_seconds:g}s]"
    print(line)


def test_fixture_fidelity_freecodecamp():
    with criterion("fixture-fidelity-freecodecamp", budget_seconds=1.0):
        snapshot = load_snapshot(FIXTURES / "snapshots" / "freecodecamp")
        issue, duration = rank_issues(snapshot, "longest_closed")[0]
        assert duration == 5.0
        census = label_census(snapshot)
        assert census["type: bug"] == 7
        assert census["type: feature request"] == 8
        window = correlate_commits(issue, snapshot)
        assert len(window) == 2
        assert sum(detect_bug_fix(c.message) for c in window) == 1


def test_fixture_fidelity_hyprland():
    with criterion("fixture-fidelity-hyprland", budget_seconds=1.0):
        snapshot = load_snapshot(FIXTURES / "snapshots" / "hyprland")
        summary = summarize_file_updates(snapshot, top_n=5)
        assert summary.segments[0] == ("src/debug/HyprCtl.cpp", 23)
        assert summary.segments[-1] == ("OTHERS", 30)
        bug_summary = summarize_file_updates(snapshot, top_n=5, bug_only=True)
        assert bug_summary.segments[0] == ("src/Windows.cpp", 19)


def test_fixture_fidelity_javascript():
    with criterion("fixture-fidelity-javascript", budget_seconds=1.0):
        snapshot = load_snapshot(FIXTURES / "snapshots" / "javascript")
        summary = summarize_file_updates(snapshot, top_n=5)
        named = dict(summary.segments)
        assert named["README.md"] == 232
        assert named["OTHERS"] == 46
        census = label_census(snapshot)
        assert census["invalid"] == 28
        assert len(snapshot.issues) == 50


def test_property_suite_1000_snapshots():
    with criterion("property-suite-1000-snapshots", budget_seconds=30.0):
        rng = random.Random(0xACCE97)
        for round_no in range(1000):
            snapshot = random_snapshot(rng, max_issues=8, max_commits=12)

            for bug_only in (False, True):
                summary = summarize_file_updates(snapshot, bug_only=bug_only)
                assert sum(v for _, v in summary.segments) == summary.total
                totals = file_update_totals(snapshot, bug_only=bug_only)
                bins = compute_histogram(snapshot, bug_only=bug_only)
                assert sum(b.file_count for b in bins) == len(totals)
                if summary.total > 0:
                    wedges = donut_geometry(summary, QUALITATIVE)
                    span = sum(w.end_angle - w.start_angle for w in wedges)
                    assert abs(span - 2 * math.pi) <= 1e-9

            bug = file_update_totals(snapshot, bug_only=True)
            full = file_update_totals(snapshot, bug_only=False)
            assert set(bug) <= set(full)
            assert all(bug[p] <= full[p] for p in bug)

            closed = [i for i in snapshot.issues if i.closed_at is not None]
            if closed:
                issue = rng.choice(closed)
                inner = {c.sha for c in correlate_commits(issue, snapshot)}
                wider = replace(
                    issue,
                    created_at=issue.created_at - timedelta(days=2),
                    closed_at=issue.closed_at + timedelta(days=2),
                )
                outer = {c.sha for c in correlate_commits(wider, snapshot)}
                assert inner <= outer


def test_layout_determinism_50_graphs():
    with criterion("layout-determinism-50-graphs", budget_seconds=60.0):
        rng = random.Random(50)
        params = LayoutParams(seed=42)
        for _ in range(50):
            nodes, edges = random_graph(rng, max_nodes=200)
            reference = layout(nodes, edges, params)

            state = initialize(nodes, edges, params)
            previous_alpha = state.alpha
            while state.iterations < params.max_iterations and not state.converged:
                state = layout_step(state, params)
                assert np.isfinite(state.positions).all()
                assert state.alpha < previous_alpha
                previous_alpha = state.alpha

            replay = {
                node_id: (float(state.positions[i, 0]), float(state.positions[i, 1]))
                for i, node_id in enumerate(state.ids)
            }
            assert replay == reference.positions  # bitwise-identical floats


def test_csv_round_trip_500_snapshots(tmp_path):
    with criterion("csv-round-trip-500-snapshots", budget_seconds=20.0):
        rng = random.Random(500500)
        target = tmp_path / "snap"
        for index in range(500):
            snapshot = random_snapshot(
                rng, max_issues=6, max_commits=8, adversarial=True
            )
            save_snapshot(snapshot, target)
            assert load_snapshot(target) == snapshot


def test_offline_client_contract():
    with criterion("offline-client-contract", budget_seconds=5.0):
        base = datetime(2023, 1, 1, tzinfo=UTC)
        rng = random.Random(77)
        fixture_items = []
        for n in range(260, 0, -1):
            item = {
                "number": n,
                "title": f"item {n}",
                "state": "open",
                "created_at": (base + timedelta(hours=n)).strftime("%Y-%m-%dT%H:%M:%SZ"),
                "closed_at": None,
                "user": {"login": "dev"},
                "assignees": [],
                "labels": [],
            }
            if rng.random() < 0.3:
                item["pull_request"] = {"url": "https://example.invalid"}
            fixture_items.append(item)

        def handler(request: httpx.Request) -> httpx.Response:
            page = int(request.url.params.get("page", "1"))
            chunk = fixture_items[(page - 1) * 100 : page * 100]
            return httpx.Response(
                200,
                headers={"X-RateLimit-Remaining": "99", "X-RateLimit-Reset": "1700000000"},
                json=chunk,
            )

        transport = httpx.MockTransport(handler)
        repo = RepoRef("octo", "project")

        issues = fetch_issues(repo, FetchConfig(max_issues=100), transport=transport)
        assert len(issues) <= 100

        all_issues = fetch_issues(repo, FetchConfig(max_issues=10_000), transport=transport)
        true_numbers = [i["number"] for i in fixture_items if "pull_request" not in i]
        got_numbers = [i.number for i in all_issues]
        assert sorted(got_numbers) == sorted(true_numbers)  # exhaustive
        assert len(set(got_numbers)) == len(got_numbers)  # duplicate-free
        pr_numbers = {i["number"] for i in fixture_items if "pull_request" in i}
        assert pr_numbers.isdisjoint(got_numbers)  # zero pull-request markers


def test_api_contract_and_etag_stability():
    with criterion("api-contract"):
        app = create_app(ServerConfig(data_dir=str(FIXTURES / "snapshots")))
        with TestClient(app, raise_server_exceptions=False) as client:
            def load_schema(name):
                return json.loads((SCHEMAS / f"{name}.schema.json").read_text())

            checks = [
                ("/api/repos", "repos"),
                ("/api/repos/hyprwm/Hyprland/timeline?mode=labels", "timeline"),
                ("/api/repos/hyprwm/Hyprland/timeline", "timeline"),
                ("/api/repos/freeCodeCamp/freeCodeCamp/issues/50530/graph", "graph"),
                ("/api/repos/airbnb/javascript/files/summary", "files_summary"),
                ("/api/repos/airbnb/javascript/files/summary?bugOnly=true", "files_summary"),
                ("/api/repos/airbnb/javascript/files/histogram", "files_histogram"),
            ]
            for url, schema_name in checks:
                response = client.get(url)
                assert response.status_code == 200, url
                jsonschema.validate(response.json(), load_schema(schema_name))

            error_cases = [
                ("/api/repos/no/where/timeline", 404),
                ("/api/repos/hyprwm/Hyprland/timeline?mode=banana", 400),
                ("/api/repos/airbnb/javascript/files/summary?bin=nope", 400),
                ("/api/repos/freeCodeCamp/freeCodeCamp/issues/1/graph", 404),
            ]
            for url, status in error_cases:
                response = client.get(url)
                assert response.status_code == status, url
                jsonschema.validate(response.json(), load_schema("error"))

            graph_url = "/api/repos/freeCodeCamp/freeCodeCamp/issues/50530/graph"
            first = client.get(graph_url)
            second = client.get(graph_url)
            assert first.headers["etag"] == second.headers["etag"]
            assert first.content == second.content


def test_q1_q6_regression_on_paper_fixtures(capsys):
    golden = json.loads((FIXTURES / "golden_answers.json").read_text())
    started = time.monotonic()
    for fixture_name, answers in golden.items():
        for question, expected in answers.items():
            code = cli.main([
                "analyze",
                "--data", str(FIXTURES / "snapshots" / fixture_name),
                "--question", question,
                "--format", "json",
            ])
            out = capsys.readouterr().out
            assert code == 0
            assert json.loads(out) == expected, f"{fixture_name}/{question}"
    elapsed = time.monotonic() - started
    assert elapsed < 2.0, f"Q1-Q6 took {elapsed:.2f}s, budget 2s"
    with capsys.disabled():
        print(f"ACCEPTANCE q1-q6-regression: PASS ({elapsed:.2f}s) [budget 2s]")
