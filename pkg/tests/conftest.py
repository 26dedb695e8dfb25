import pytest

_LINES = []


@pytest.fixture
def criterion():
    """Record and print one pass/fail line: criterion(name, worst, tolerance)."""

    def record(name, worst, tol):
        ok = bool(worst <= tol)
        line = f"{'PASS' if ok else 'FAIL'}  {name}: worst={worst:.3e} tol={tol:.1e}"
        _LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
