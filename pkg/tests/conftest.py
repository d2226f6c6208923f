import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Append an acceptance verdict line, then fail the test if any condition failed."""
    def _record(number, title, conditions, elapsed, limit=None):
        if limit is not None:
            conditions = dict(conditions, **{f"runtime {elapsed:.2f}s < {limit:g}s": elapsed < limit})
        ok = all(conditions.values())
        failed = [name for name, good in conditions.items() if not good]
        line = f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title} ({elapsed:.2f}s)"
        if failed:
            line += " -- failed: " + "; ".join(failed)
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
