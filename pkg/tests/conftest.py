import pytest

# filled by test_acceptance.py: criterion number -> (passed, detail)
ACCEPTANCE = {}


@pytest.fixture
def record():
    def _record(n, passed, detail=""):
        ACCEPTANCE[n] = (bool(passed), detail)
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
