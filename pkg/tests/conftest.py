import numpy as np
import pytest

from ccifc.scenario import figure_preset


@pytest.fixture
def fig6():
    return figure_preset("fig6").scenario


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record one verdict line per acceptance criterion for the terminal summary."""
    def record(k, ok, detail, warn=False):
        status = "PASS" if ok else "FAIL"
        if ok and warn:
            status = "PASS (WARN)"
        line = f"criterion {k:>2}: {status}  {detail}"
        _ACCEPTANCE[k] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[k])
