import time
from contextlib import contextmanager

import pytest

# criterion number -> list of (case, ok, detail)
CRITERIA = {}
TITLES = {}


@contextmanager
def _record(number, title, case=""):
    TITLES[number] = title
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        detail = f"{case}: {type(exc).__name__}: {exc}".strip(": ")
        CRITERIA.setdefault(number, []).append((case, False, detail))
        raise
    took = time.perf_counter() - start
    CRITERIA.setdefault(number, []).append((case, True, f"{case} {took:.1f}s".strip()))


@pytest.fixture
def criterion():
    """``with criterion(n, title, case):`` records a PASS or FAIL for criterion ``n``."""
    return _record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(CRITERIA):
        cases = CRITERIA[n]
        ok = all(c[1] for c in cases)
        shown = [c[2] for c in cases if not c[1]] if not ok else [c[2] for c in cases]
        tr.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {TITLES[n]} "
                      f"[{'; '.join(shown)}]")
