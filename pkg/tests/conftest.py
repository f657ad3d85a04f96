import pytest

from huygens.causality import Comoving, CommPair, DetectorConfig
from huygens.cosmology import normalized_pair

ANCHOR = 2.0 / 3.0


@pytest.fixture(scope="session")
def matter():
    return normalized_pair(ANCHOR)[0]


@pytest.fixture(scope="session")
def de_sitter():
    return normalized_pair(ANCHOR)[1]


@pytest.fixture(params=["matter", "lambda"])
def model(request):
    m, l = normalized_pair(ANCHOR)
    return m if request.param == "matter" else l


def make_pair(gap_a=10.0, gap_b=10.0, t_ia=ANCHOR, t_ib=2.0, delta=0.01, R=0.5, delta_b=None, couplings=(1.0, 1.0)):
    alice = DetectorConfig(gap_a, couplings[0], t_ia, delta)
    bob = DetectorConfig(gap_b, couplings[1], t_ib, delta if delta_b is None else delta_b)
    return CommPair(alice, bob, Comoving(R))


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
