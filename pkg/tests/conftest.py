import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from barnette.catalog import default_catalog  # noqa: E402
from barnette.planar_core import parse_triangulation  # noqa: E402
from barnette.rewrite import parse_trace, replay  # noqa: E402

import helpers  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def k4():
    return replay(parse_trace("start G 3\n"))


@pytest.fixture(scope="session")
def ico():
    return helpers.icosahedron()


@pytest.fixture(scope="session")
def small_members():
    return helpers.members(14)


@pytest.fixture(scope="session")
def all_members():
    return helpers.members(22)


@pytest.fixture
def acceptance_report():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
