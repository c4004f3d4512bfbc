import numpy as np
import pytest

from slithyp.conformal import fit_map
from slithyp.domains import make_comb

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def comb4_map():
    """comb(N=4) fitted at 512 boundary samples, anchor 0.5."""
    return fit_map(make_comb(N=4), 512, 0.5)


@pytest.fixture(scope="session")
def comb2_map():
    return fit_map(make_comb(N=2), 128, 0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
