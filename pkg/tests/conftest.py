import pytest

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def report():
    """Record one acceptance line; the summary prints them all at the end."""

    def _report(label: str, ok: bool, detail: str) -> bool:
        line = (label, bool(ok), detail)
        _ACCEPTANCE.append(line)
        print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for label, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
