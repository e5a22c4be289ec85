import numpy as np
import pytest

from qlogic import kernels


@pytest.fixture(scope="session", autouse=True)
def _compiled_kernels():
    kernels.warmup()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
