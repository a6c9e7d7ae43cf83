import pytest
from hypothesis import HealthCheck, settings

from rubycode.lattice import build_patch

settings.register_profile("rubycode", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("rubycode")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def single_plaquette():
    return build_patch(1, 1, "open")


@pytest.fixture(scope="session")
def torus():
    return build_patch(2, 2, "periodic")


@pytest.fixture
def report_line():
    """Record one acceptance line; it is printed now and again in the summary."""
    def record(number: int, title: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
