import pytest

ACCEPTANCE: dict = {}


@pytest.fixture
def record():
    """record(criterion, passed, detail) -> stores one summary line per criterion."""

    def _record(criterion: int, passed: bool, detail: str) -> bool:
        ACCEPTANCE[criterion] = (passed, detail)
        print(f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {detail}")
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
