import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """``criterion(n, ok, detail)`` prints and records one pass/fail line, then asserts."""
    def report(n, ok, detail):
        line = "%s criterion %d: %s" % ("PASS" if ok else "FAIL", n, detail)
        print(line)
        ACCEPTANCE_LINES.append(line)
        assert ok, line
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
