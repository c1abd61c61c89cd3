import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from isodiv import fixtures, search  # noqa: E402
from isodiv.tiling import Tile  # noqa: E402


@pytest.fixture(scope="session")
def equilateral():
    return Tile.equilateral()


@pytest.fixture(scope="session")
def census_levels(equilateral):
    """Enumerated volumes of 1..7 regular triangles."""
    return {n: search.enumerate_divs(equilateral, n) for n in range(1, 8)}


@pytest.fixture(scope="session")
def gww():
    return fixtures.gww_pair()


@pytest.fixture(scope="session")
def gww_scalene():
    return fixtures.gww_pair(fixtures.scalene_tile())


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        terminalreporter.write_line(results[key])
