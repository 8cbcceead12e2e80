import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion; printed in the terminal summary."""
    def record(number, ok, text, seconds, limit):
        timed = seconds < limit
        status = "PASS" if ok and timed else "FAIL"
        ACCEPTANCE_LINES.append(f"{status} criterion {number:>2}: {text} ({seconds:.2f} s, limit {limit:g} s)")
        assert ok, text
        assert timed, f"criterion {number} took {seconds:.2f} s, limit {limit:g} s"
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
