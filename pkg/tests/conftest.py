import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from oracles import pollution_weights  # noqa: E402


@pytest.fixture
def pollution():
    from sparserc import WeightedDag
    return WeightedDag(pollution_weights())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_collection_modifyitems(config, items):
    if os.environ.get("SPARSERC_NIGHTLY") == "1":
        return
    skip = pytest.mark.skip(reason="set SPARSERC_NIGHTLY=1 to run the d=100 checks")
    for item in items:
        if "nightly" in item.keywords:
            item.add_marker(skip)


# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
