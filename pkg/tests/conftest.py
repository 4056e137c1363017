import pytest

from pathfree.congest import TALLY

_CRITERIA: dict[int, tuple[bool, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "allow_violations: test provokes bandwidth violations on purpose")


@pytest.fixture(autouse=True)
def _no_stray_violations(request):
    before = len(TALLY.violations)
    yield
    if request.node.get_closest_marker("allow_violations") is None:
        new = TALLY.violations[before:]
        assert not new, f"unexpected bandwidth violations: {new[:3]}"


@pytest.fixture
def criterion():
    """Record and echo one acceptance line: ``criterion(k, ok, detail)``."""
    def record(k: int, ok: bool, detail: str) -> bool:
        _CRITERIA[k] = (ok, detail)
        print(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        ok, detail = _CRITERIA[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")
    terminalreporter.write_line(f"simulator runs: {TALLY.runs}, bandwidth violations: {len(TALLY.violations)}")
