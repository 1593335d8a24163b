import pytest

_KEY = pytest.StashKey[list]()


@pytest.fixture
def report(request):
    """Record one acceptance line: report(number, ok, detail)."""
    lines = request.config.stash.setdefault(_KEY, [])

    def add(number, ok, detail):
        lines.append((number, ok, detail))

    return add


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(lines, key=lambda t: t[0]):
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
