import pytest

_CRITERIA: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(key, ok, detail)."""
    def record(key: str, ok: bool, detail: str = "") -> bool:
        _CRITERIA[key] = (ok, detail)
        print(f"{key}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA):
        ok, detail = _CRITERIA[key]
        terminalreporter.write_line(f"{key}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
