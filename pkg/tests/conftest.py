import pytest

from fracdiff import FractionalOrder, Grid, ProblemSpec


def reference_problem(alpha, N=50, T=1.0, F=100, **overrides):
    """The reference experiment: L = 1, k = 1, zero initial data, g0 = 40, gL = 20."""
    fields = dict(p0=0.0, p1=0.0, g0=40.0, gL=20.0)
    fields.update(overrides)
    return ProblemSpec(FractionalOrder(alpha), 1.0, Grid(1.0, N, T, F), **fields)


@pytest.fixture
def scenario():
    return reference_problem


_VERDICTS = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record one acceptance line: ``verdict(n, title, ok, detail)``."""
    lines = request.config.stash.setdefault(_VERDICTS, [])

    def record(number, title, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
        lines.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
