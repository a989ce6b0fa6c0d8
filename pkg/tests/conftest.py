from pathlib import Path

import pytest

from elid_planner.config import load_scenario

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def table1():
    return load_scenario("table1")


@pytest.fixture(scope="session")
def tight_d9():
    return load_scenario("tight_d9")


@pytest.fixture(scope="session")
def road(table1):
    return table1.road


@pytest.fixture(scope="session")
def lidar(table1):
    return table1.lidar


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
