import pytest

from uplift_sig import CampaignPair

# women / men split of one campaign
TABLE2 = (81770, 5656, 6391, 373, 85257, 6231, 6699, 443)
# two parallel campaigns
TABLE3 = (167027, 11887, 13090, 816, 44356, 3447, 7987, 492)


@pytest.fixture
def table2():
    return CampaignPair.from_counts(*TABLE2, labels=("women", "men"))


@pytest.fixture
def table3():
    return CampaignPair.from_counts(*TABLE3, labels=("campaign 1", "campaign 2"))


@pytest.fixture
def symmetric_pair():
    return CampaignPair.from_counts(1000, 120, 200, 18, 1000, 120, 200, 18)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
