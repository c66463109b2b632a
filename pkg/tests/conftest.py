import pytest

_REPORT: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def report():
    """Record one acceptance line: ``report(key, passed, detail)``."""

    def record(key: str, passed: bool, detail: str) -> bool:
        _REPORT[key] = (bool(passed), detail)
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_REPORT):
        passed, detail = _REPORT[key]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {key}: {detail}")
