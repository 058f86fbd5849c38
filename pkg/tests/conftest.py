from pathlib import Path

import pytest

from qstr.calculi import builtin

HERE = Path(__file__).parent
DATA = HERE.parent / "src" / "qstr" / "data"
FIXTURES = HERE / "fixtures" / "networks"
GOLDEN = HERE / "golden"


@pytest.fixture(scope="session")
def ia():
    return builtin("ia")


@pytest.fixture(scope="session")
def rcc8():
    return builtin("rcc8")


@pytest.fixture(scope="session")
def pa():
    return builtin("pa")
