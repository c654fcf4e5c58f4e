import numpy as np
import pytest
from hypothesis import strategies as st

from linebroadcast.network import LinearNetwork


@pytest.fixture
def five():
    """Worked instance: positions [0,1,3,4,7], source at x=3."""
    return LinearNetwork([0, 1, 3, 4, 7], 2)


@pytest.fixture
def adv_a():
    return LinearNetwork([0, 100, 101, 203], 1)


@pytest.fixture
def adv_b():
    return LinearNetwork([0, 100, 101, 102, 203], 2)


def random_network(rng, n_lo=3, n_hi=7, interior=True, integer=False):
    n = int(rng.integers(n_lo, n_hi + 1))
    while True:
        if integer:
            x = np.sort(rng.integers(0, 10**6, n)).astype(float)
        else:
            x = np.sort(rng.uniform(0, 100, n))
        if np.all(np.diff(x) > 0):
            break
    s = int(rng.integers(1, n - 1)) if interior else int(rng.integers(0, n))
    return LinearNetwork(x, s)


@st.composite
def networks(draw, min_n=3, max_n=30, interior=True):
    """Strictly increasing integer-spaced positions; integer gaps keep distances exact."""
    gaps = draw(st.lists(st.integers(1, 10**5), min_size=min_n - 1, max_size=max_n - 1))
    x = np.concatenate(([0.0], np.cumsum(gaps, dtype=float)))
    n = x.size
    lo, hi = (1, n - 2) if interior else (0, n - 1)
    s = draw(st.integers(lo, hi))
    return LinearNetwork(x, s)


ACCEPTANCE_LINES = {}


def pytest_runtest_logreport(report):
    # one line per acceptance criterion, collected from the test outcome
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if not name.startswith("test_criterion_"):
        return
    num = int(name.split("_")[2])
    status = "PASS" if report.passed else "FAIL"
    line = f"criterion {num:2d} {status}  {name[len('test_criterion_'):]}"
    measured = [ln for ln in report.capstdout.splitlines() if ln.strip()]
    if measured:
        line += f"  [{measured[-1].strip()}]"
    if report.failed:
        msg = str(report.longrepr.reprcrash.message).splitlines()[0] if report.longrepr else ""
        line += f"  ({msg[:120]})"
    ACCEPTANCE_LINES[num] = line
    print("\n" + line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[num])
