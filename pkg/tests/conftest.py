from pathlib import Path

import pytest

from frobtoric.lattice import hirzebruch, product_fan, projective_space, weighted_p112

FANS = Path(__file__).resolve().parent.parent / "fans"


@pytest.fixture(scope="session")
def fans_dir():
    return FANS


@pytest.fixture(scope="session")
def surfaces():
    return {
        "P2": projective_space(2),
        "P1xP1": product_fan(projective_space(1), projective_space(1)),
        "F1": hirzebruch(1),
        "P112": weighted_p112(),
    }


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
