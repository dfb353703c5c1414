import contextlib
import time

import pytest

RESULTS: list[tuple[int, str, str, float]] = []


@contextlib.contextmanager
def _criterion(num: int, title: str):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        RESULTS.append((num, title, "FAIL", time.perf_counter() - t0))
        raise
    RESULTS.append((num, title, "PASS", time.perf_counter() - t0))


@pytest.fixture
def criterion():
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, status, secs in sorted(RESULTS):
        terminalreporter.write_line(f"{status} criterion {num:2d}: {title} ({secs:.2f}s)")
