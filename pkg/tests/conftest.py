import functools
import math

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def walk(n, seed):
    return np.cumsum(np.random.default_rng(seed).standard_normal(n))


def full_dp_dtw(a, b, w):
    """Reference DTW: full (L+1)^2 cost matrix, cells outside the band set to inf."""
    L = len(a)
    D = np.full((L + 1, L + 1), np.inf)
    D[0, 0] = 0.0
    for i in range(1, L + 1):
        for j in range(1, L + 1):
            if abs(i - j) > w:
                continue
            D[i, j] = (a[i - 1] - b[j - 1]) ** 2 + min(D[i - 1, j - 1], D[i - 1, j], D[i, j - 1])
    return math.sqrt(D[L, L])


def path_enum_dtw(a, b, w):
    """DTW by enumerating every monotone band-constrained warping path (tiny inputs only)."""
    L = len(a)

    @functools.lru_cache(maxsize=None)
    def best(i, j):
        cost = (a[i] - b[j]) ** 2
        if i == L - 1 and j == L - 1:
            return cost
        options = []
        for di, dj in ((1, 1), (1, 0), (0, 1)):
            ni, nj = i + di, j + dj
            if ni < L and nj < L and abs(ni - nj) <= w:
                options.append(best(ni, nj))
        return cost + min(options) if options else math.inf

    return math.sqrt(best(0, 0))


def naive_envelope(q, w):
    n = len(q)
    up = np.array([max(q[max(0, i - w) : min(n, i + w + 1)]) for i in range(n)])
    lo = np.array([min(q[max(0, i - w) : min(n, i + w + 1)]) for i in range(n)])
    return up, lo


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one PASS/FAIL line per acceptance criterion, printed after the run
_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    num, title = mark.args
    if rep.failed or (rep.when == "call" and num not in _criteria):
        _criteria[num] = (title, "FAIL" if rep.failed else "PASS")
    elif rep.skipped:
        _criteria[num] = (title, "SKIP")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        title, status = _criteria[num]
        terminalreporter.write_line(f"criterion {num}: {status}  {title}")
