import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from abcrules import Profile  # noqa: E402

ACCEPTANCE_LINES = []


def record_acceptance(number, ok, detail):
    line = f"ACCEPTANCE {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append((number, line))
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@st.composite
def profiles(draw, m=None, min_m=2, max_m=5, max_voters=6, allow_empty_ballots=True):
    m = m if m is not None else draw(st.integers(min_m, max_m))
    ballot = st.frozensets(st.integers(1, m), min_size=0 if allow_empty_ballots else 1)
    ballots = draw(st.lists(ballot, min_size=1, max_size=max_voters))
    return Profile.from_ballots(m, ballots)


@st.composite
def instances(draw, max_m=5, max_voters=6):
    """(profile, k) with 1 <= k < m."""
    a = draw(profiles(min_m=2, max_m=max_m, max_voters=max_voters))
    k = draw(st.integers(1, a.m - 1))
    return a, k


@pytest.fixture
def example1():
    return Profile.from_counts(8, [((1, 2, 3, 4), 75), ((5, 6, 7, 8), 25)])
