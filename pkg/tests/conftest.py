import time

import pytest

from zetasum.constants import laurent_table
from zetasum.numkern import PrecisionContext
from zetasum.zeros import find_zeros

# first ordinate, bisection on mpmath.siegelz at 60 digits (independent of zetasum)
GAMMA_1 = "14.13472514173469379045725198356247027078425711569923961"
# second and third ordinates, mpmath.zetazero
GAMMA_2 = "21.0220396387715549926284795939"
GAMMA_3 = "25.0108575801456887632137909926"

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(40)


@pytest.fixture(scope="session")
def tables(ctx):
    return laurent_table(20, ctx)


@pytest.fixture(scope="session")
def zeros_1005(ctx):
    """Zero table to 1005 together with the seconds spent computing it."""
    start = time.perf_counter()
    table = find_zeros(1005, ctx)
    return table, time.perf_counter() - start


@pytest.fixture(scope="session")
def table(zeros_1005):
    return zeros_1005[0]


@pytest.fixture
def record():
    def _record(name, ok, detail):
        ACCEPTANCE[name] = (ok, detail)
        print(f"\n{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
