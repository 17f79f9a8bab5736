import time

import pytest

_RESULTS_KEY = pytest.StashKey[dict]()
_START_KEY = pytest.StashKey[float]()


def pytest_configure(config):
    config.stash[_RESULTS_KEY] = {}
    config.stash[_START_KEY] = time.perf_counter()


@pytest.fixture
def acceptance(request):
    """Record ``(criterion, passed, detail)`` for the end-of-run report."""
    results = request.config.stash[_RESULTS_KEY]

    def record(number: int, title: str, parts: list[tuple[str, bool, str]]):
        passed = all(ok for _, ok, _ in parts)
        detail = "; ".join(f"{label} {'ok' if ok else 'FAILED'} ({info})"
                           for label, ok, info in parts)
        results[number] = (title, passed, detail)
        print(f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}: {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash[_RESULTS_KEY]
    if not results:
        return
    elapsed = time.perf_counter() - config.stash[_START_KEY]
    tr = terminalreporter
    tr.write_sep("=", "acceptance criteria")
    for number in sorted(results):
        title, passed, detail = results[number]
        tr.write_line(f"{'PASS' if passed else 'FAIL'}  criterion {number}: {title} | {detail}")
    tr.write_line(f"{'PASS' if elapsed <= 120 else 'FAIL'}  whole test run: {elapsed:.1f} s "
                  "(limit 120 s)")
