import threading
import time
from datetime import datetime, timedelta, timezone

import httpx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from issuescope.github_client import (
    AuthError,
    DecodeError,
    DetailError,
    FetchConfig,
    NetworkError,
    NotFound,
    RateLimited,
    RateLimitState,
    fetch_commits,
    fetch_issues,
    respect_rate_limit,
)
from issuescope.records import RepoRef

UTC = timezone.utc
REPO = RepoRef("octo", "project")
ISSUES_PATH = "/repos/octo/project/issues"
COMMITS_PATH = "/repos/octo/project/commits"

OK_HEADERS = {"X-RateLimit-Remaining": "55", "X-RateLimit-Reset": "1700000000"}


def iso(dt: datetime) -> str:
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def issue_item(number, created, pull_request=False, state="open", closed=None):
    item = {
        "number": number,
        "title": f"issue {number}",
        "state": state,
        "created_at": iso(created),
        "closed_at": iso(closed) if closed else None,
        "user": {"login": f"user{number % 5}"},
        "assignees": [],
        "labels": [{"name": "bug", "color": "d73a4a"}],
    }
    if pull_request:
        item["pull_request"] = {"url": "https://example.invalid/pr"}
    return item


def commit_item(sha, when, message="msg", author="dev"):
    return {
        "sha": sha,
        "author": {"login": author},
        "commit": {
            "message": message,
            "author": {"name": author, "date": iso(when)},
            "committer": {"date": iso(when)},
        },
    }


def recorded_transport(pages, headers=OK_HEADERS):
    """Serve canned payloads keyed by (method, path, page); 404 otherwise."""

    def handler(request: httpx.Request) -> httpx.Response:
        page = int(request.url.params.get("page", "1"))
        key = (request.method, request.url.path, page)
        if key not in pages:
            return httpx.Response(404, headers=headers, json={"message": "missing"})
        entry = pages[key]
        if callable(entry):
            return entry(request)
        return httpx.Response(200, headers=headers, json=entry)

    return httpx.MockTransport(handler)


class TestRespectRateLimit:
    def test_budget_available(self):
        state = RateLimitState(10, datetime(2023, 6, 1, tzinfo=UTC))
        assert respect_rate_limit(state, "fail").kind == "proceed"

    def test_exhausted_fail_policy(self):
        state = RateLimitState(0, datetime(2023, 6, 1, tzinfo=UTC))
        assert respect_rate_limit(state, "fail").kind == "abort"

    def test_exhausted_wait_policy_sleeps_until_reset(self):
        now = datetime(2023, 6, 1, 12, 0, 0, tzinfo=UTC)
        state = RateLimitState(0, now + timedelta(seconds=90))
        decision = respect_rate_limit(state, "wait", now=now)
        assert decision.kind == "sleep"
        assert decision.sleep_seconds == pytest.approx(90, abs=1)

    def test_unknown_policy(self):
        with pytest.raises(ValueError):
            respect_rate_limit(RateLimitState(1, datetime.now(UTC)), "maybe")


class TestFetchIssues:
    def test_filters_pull_requests(self):
        base = datetime(2023, 6, 1, tzinfo=UTC)
        page = [
            issue_item(3, base + timedelta(days=2)),
            issue_item(2, base + timedelta(days=1), pull_request=True),
            issue_item(1, base),
        ]
        transport = recorded_transport({("GET", ISSUES_PATH, 1): page})
        issues = fetch_issues(REPO, FetchConfig(), transport=transport)
        assert [i.number for i in issues] == [3, 1]

    def test_empty_repo(self):
        transport = recorded_transport({("GET", ISSUES_PATH, 1): []})
        assert fetch_issues(REPO, FetchConfig(), transport=transport) == []

    def test_max_issues_across_pages(self):
        base = datetime(2023, 1, 1, tzinfo=UTC)
        all_items = [
            issue_item(n, base + timedelta(hours=n)) for n in range(250, 0, -1)
        ]
        pages = {
            ("GET", ISSUES_PATH, 1): all_items[:100],
            ("GET", ISSUES_PATH, 2): all_items[100:200],
            ("GET", ISSUES_PATH, 3): all_items[200:],
        }
        issues = fetch_issues(REPO, FetchConfig(max_issues=100), transport=recorded_transport(pages))
        # independent oracle: sort the fixture by creation time, newest first
        expected = sorted(
            (item["number"] for item in all_items),
            key=lambda n: n,
            reverse=True,
        )[:100]
        assert [i.number for i in issues] == expected

    def test_pagination_exhaustive_and_duplicate_free(self):
        base = datetime(2023, 1, 1, tzinfo=UTC)
        all_items = [issue_item(n, base + timedelta(hours=n)) for n in range(230, 0, -1)]
        pages = {
            ("GET", ISSUES_PATH, 1): all_items[:100],
            ("GET", ISSUES_PATH, 2): all_items[100:200],
            ("GET", ISSUES_PATH, 3): all_items[200:],
        }
        issues = fetch_issues(REPO, FetchConfig(max_issues=500), transport=recorded_transport(pages))
        numbers = [i.number for i in issues]
        assert sorted(numbers) == list(range(1, 231))
        assert len(set(numbers)) == len(numbers)

    def test_timestamps_are_utc(self):
        base = datetime(2023, 6, 1, 10, 30, tzinfo=UTC)
        transport = recorded_transport(
            {("GET", ISSUES_PATH, 1): [issue_item(1, base, state="closed", closed=base)]}
        )
        (issue,) = fetch_issues(REPO, FetchConfig(), transport=transport)
        assert issue.created_at.tzinfo == UTC
        assert issue.closed_at == base

    def test_not_found(self):
        transport = recorded_transport({})
        with pytest.raises(NotFound):
            fetch_issues(REPO, FetchConfig(), transport=transport)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.booleans(), max_size=30))
    def test_no_pull_request_survives(self, markers):
        base = datetime(2023, 6, 1, tzinfo=UTC)
        page = [
            issue_item(i + 1, base + timedelta(minutes=i), pull_request=is_pr)
            for i, is_pr in enumerate(markers)
        ]
        transport = recorded_transport({("GET", ISSUES_PATH, 1): page})
        issues = fetch_issues(REPO, FetchConfig(), transport=transport)
        pr_numbers = {i + 1 for i, is_pr in enumerate(markers) if is_pr}
        assert pr_numbers.isdisjoint({i.number for i in issues})
        assert len(issues) == len(markers) - len(pr_numbers)


class TestErrorMapping:
    def test_auth_error_on_401(self):
        def handler(request):
            return httpx.Response(401, json={"message": "bad credentials"})

        with pytest.raises(AuthError):
            fetch_issues(REPO, FetchConfig(), transport=httpx.MockTransport(handler))

    def test_rate_limited_on_403_with_zero_remaining(self):
        reset = 1_700_000_123

        def handler(request):
            return httpx.Response(
                403,
                headers={"X-RateLimit-Remaining": "0", "X-RateLimit-Reset": str(reset)},
                json={"message": "rate limited"},
            )

        with pytest.raises(RateLimited) as exc:
            fetch_issues(REPO, FetchConfig(), transport=httpx.MockTransport(handler))
        assert exc.value.reset_at == datetime.fromtimestamp(reset, tz=UTC)

    def test_wait_policy_sleeps_then_retries(self):
        reset_at = int(time.time()) + 30
        calls = {"n": 0}
        naps = []

        def handler(request):
            calls["n"] += 1
            if calls["n"] == 1:
                return httpx.Response(
                    403,
                    headers={
                        "X-RateLimit-Remaining": "0",
                        "X-RateLimit-Reset": str(reset_at),
                    },
                    json={"message": "slow down"},
                )
            return httpx.Response(200, headers=OK_HEADERS, json=[])

        issues = fetch_issues(
            REPO,
            FetchConfig(),
            transport=httpx.MockTransport(handler),
            rate_limit_policy="wait",
            sleep_fn=naps.append,
        )
        assert issues == []
        assert len(naps) == 1
        assert naps[0] <= 31

    def test_403_without_headers_is_auth_error(self):
        def handler(request):
            return httpx.Response(403, json={"message": "forbidden"})

        with pytest.raises(AuthError):
            fetch_issues(REPO, FetchConfig(), transport=httpx.MockTransport(handler))

    def test_network_error_after_retries(self):
        attempts = {"n": 0}

        def handler(request):
            attempts["n"] += 1
            raise httpx.ConnectError("unreachable")

        naps = []
        with pytest.raises(NetworkError):
            fetch_issues(
                REPO,
                FetchConfig(retry_limit=2),
                transport=httpx.MockTransport(handler),
                sleep_fn=naps.append,
            )
        assert attempts["n"] == 3  # initial try + 2 retries
        assert len(naps) == 2

    def test_transient_5xx_recovers(self):
        attempts = {"n": 0}

        def handler(request):
            attempts["n"] += 1
            if attempts["n"] < 3:
                return httpx.Response(502, json={"message": "bad gateway"})
            return httpx.Response(200, headers=OK_HEADERS, json=[])

        issues = fetch_issues(
            REPO,
            FetchConfig(retry_limit=3),
            transport=httpx.MockTransport(handler),
            sleep_fn=lambda _: None,
        )
        assert issues == []

    def test_decode_error_on_malformed_payload(self):
        def handler(request):
            return httpx.Response(200, headers=OK_HEADERS, content=b"not json")

        with pytest.raises(DecodeError):
            fetch_issues(REPO, FetchConfig(), transport=httpx.MockTransport(handler))

    def test_decode_error_on_wrong_shape(self):
        def handler(request):
            return httpx.Response(200, headers=OK_HEADERS, json={"not": "a list"})

        with pytest.raises(DecodeError):
            fetch_issues(REPO, FetchConfig(), transport=httpx.MockTransport(handler))


class TestFetchCommits:
    def since(self):
        return datetime(2023, 6, 1, tzinfo=UTC)

    def test_window_excludes_all(self):
        transport = recorded_transport({("GET", COMMITS_PATH, 1): []})
        commits = fetch_commits(REPO, self.since(), FetchConfig(), transport=transport)
        assert commits == []

    def test_since_boundary_inclusive(self):
        base = datetime(2023, 6, 1, tzinfo=UTC)
        times = [base + timedelta(days=k) for k in range(5)]
        shas = [f"{k:040x}" for k in range(5)]
        listing = [commit_item(shas[k], times[k]) for k in range(4, -1, -1)]
        pages = {("GET", COMMITS_PATH, 1): listing}
        for k in range(5):
            pages[("GET", f"{COMMITS_PATH}/{shas[k]}", 1)] = {
                "sha": shas[k],
                "files": [{"filename": "f.py", "additions": 1, "deletions": 0}],
            }
        commits = fetch_commits(REPO, times[2], FetchConfig(), transport=recorded_transport(pages))
        assert len(commits) == 3
        assert [c.committed_at for c in commits] == [times[4], times[3], times[2]]

    def test_detail_enrichment(self):
        when = datetime(2023, 6, 2, tzinfo=UTC)
        sha = "a" * 40
        pages = {
            ("GET", COMMITS_PATH, 1): [commit_item(sha, when)],
            ("GET", f"{COMMITS_PATH}/{sha}", 1): {
                "sha": sha,
                "files": [
                    {"filename": "src/a.py", "additions": 3, "deletions": 1},
                    {"filename": "src/b.py", "additions": 10, "deletions": 0},
                ],
            },
        }
        (commit,) = fetch_commits(REPO, self.since(), FetchConfig(), transport=recorded_transport(pages))
        assert [(f.path, f.changes) for f in commit.files] == [
            ("src/a.py", 4), ("src/b.py", 10),
        ]
        assert commit.stats_missing is False

    def test_missing_stats_flagged_not_dropped(self):
        when = datetime(2023, 6, 2, tzinfo=UTC)
        sha = "b" * 40
        pages = {
            ("GET", COMMITS_PATH, 1): [commit_item(sha, when)],
            ("GET", f"{COMMITS_PATH}/{sha}", 1): {"sha": sha},
        }
        (commit,) = fetch_commits(REPO, self.since(), FetchConfig(), transport=recorded_transport(pages))
        assert commit.stats_missing is True
        assert commit.files == ()

    def test_detail_error_carries_sha(self):
        when = datetime(2023, 6, 2, tzinfo=UTC)
        sha = "c" * 40
        pages = {("GET", COMMITS_PATH, 1): [commit_item(sha, when)]}
        with pytest.raises(DetailError) as exc:
            fetch_commits(REPO, self.since(), FetchConfig(), transport=recorded_transport(pages))
        assert exc.value.sha == sha

    def test_author_falls_back_to_commit_name(self):
        when = datetime(2023, 6, 2, tzinfo=UTC)
        sha = "d" * 40
        item = commit_item(sha, when)
        item["author"] = None
        pages = {
            ("GET", COMMITS_PATH, 1): [item],
            ("GET", f"{COMMITS_PATH}/{sha}", 1): {"sha": sha, "files": []},
        }
        (commit,) = fetch_commits(REPO, self.since(), FetchConfig(), transport=recorded_transport(pages))
        assert commit.author == "dev"

    @pytest.mark.parametrize("limit,expected_max", [(1, 1), (3, 3)])
    def test_bounded_concurrency(self, limit, expected_max):
        base = datetime(2023, 6, 2, tzinfo=UTC)
        shas = [f"{k:040x}" for k in range(12)]
        listing = [commit_item(s, base + timedelta(minutes=k)) for k, s in enumerate(shas)]
        lock = threading.Lock()
        active = {"now": 0, "max": 0}

        def detail(request):
            with lock:
                active["now"] += 1
                active["max"] = max(active["max"], active["now"])
            time.sleep(0.02)
            with lock:
                active["now"] -= 1
            sha = request.url.path.rsplit("/", 1)[1]
            return httpx.Response(200, headers=OK_HEADERS, json={"sha": sha, "files": []})

        def handler(request):
            if request.url.path == COMMITS_PATH:
                return httpx.Response(200, headers=OK_HEADERS, json=listing)
            return detail(request)

        commits = fetch_commits(
            REPO,
            base,
            FetchConfig(max_in_flight=limit),
            transport=httpx.MockTransport(handler),
        )
        assert len(commits) == 12
        assert active["max"] <= expected_max
