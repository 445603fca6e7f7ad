import pytest

from riswpc.montecarlo import McConfig, sample_T_moments

PROTOCOL_TRIALS = 1_000_000


@pytest.fixture(scope="session")
def moments_m50():
    """Cascade-sum moments at M=50 from the full protocol run (shared, ~5 s)."""
    return sample_T_moments(50, McConfig(trials=PROTOCOL_TRIALS, seed=20240501))


_acceptance_lines = []


@pytest.fixture
def report():
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    def add(criterion, name, passed, detail=""):
        _acceptance_lines.append(f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {name}  {detail}".rstrip())
        return passed
    return add


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
