import pytest
from hypothesis import settings

settings.register_profile("renvol", deadline=None, derandomize=True, print_blob=True)
settings.load_profile("renvol")


def pytest_configure(config):
    config._renvol_acceptance = []


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion."""
    lines = request.config._renvol_acceptance

    def record(criterion, ok, detail=""):
        lines.append((criterion, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_renvol_acceptance", [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in lines:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {criterion}  {detail}")
