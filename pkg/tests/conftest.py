import pytest

from fragrecon.seqmodel import AlphabetMode, make_fragment_set

FIVE = [b"abthatb", b"hatbpaab", b"tbabhhatbpaa", b"paabtabh", b"bhaabtpb"]
GATTACA = [b"GATT", b"ACA", b"GGT", b"GA", b"TTAC", b"AGGT"]
AAB = [b"a", b"ab", b"aa", b"b"]


@pytest.fixture
def gattaca():
    return make_fragment_set(GATTACA)


@pytest.fixture
def aab():
    return make_fragment_set(AAB, AlphabetMode.GENERIC)


@pytest.fixture
def five():
    return make_fragment_set(FIVE, AlphabetMode.GENERIC)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.REPORT:
            terminalreporter.write_line(line)
