import os
import sys

import numpy as np
import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "fixtures")

# Strings listed for the palindromic construction, n = 1..5.
PALINDROMIC = {
    1: "1",
    2: "121",
    3: "123121321",
    4: "123412314231243121342132413214321",
    5: (
        "123451234152341253412354123145231425314235142315423124531243512431524312543121345213"
        "425134215342135421324513241532413524132541321453214352143251432154321"
    ),
}


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run long solver tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running solver test, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def superperm_872():
    with open(os.path.join(FIXTURES, "superperm-6-866.txt"), "r", encoding="ascii") as f:
        return f.read().strip()


@pytest.fixture(scope="session")
def tour_866_path():
    return os.path.join(FIXTURES, "6.866.tour")


@pytest.fixture(scope="session")
def superperm_872_path():
    return os.path.join(FIXTURES, "superperm-6-866.txt")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
