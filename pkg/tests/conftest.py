"""Shared fixtures: group tables are expensive, so cache them per session."""

import pytest

from weylcensus import rootsys, weylgroup

_TABLES = {}

# (name, passed, detail) rows recorded by the acceptance tests; echoed at the
# end of the run so there is one visible line per criterion either way.
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{name}: {status} ({detail})")


def get_table(label):
    """Enumerate the Weyl group for a builtin label, memoized for the session."""
    if label not in _TABLES:
        rs = rootsys.root_system(label)
        _TABLES[label] = weylgroup.enumerate_group(rs)
    return _TABLES[label]


@pytest.fixture
def a2():
    return get_table("A2")


@pytest.fixture
def b2():
    return get_table("B2")


@pytest.fixture
def g2():
    return get_table("G2")


@pytest.fixture
def a3():
    return get_table("A3")


@pytest.fixture
def b3():
    return get_table("B3")
