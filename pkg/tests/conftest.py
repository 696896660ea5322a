import pytest

from bnscore import Variable, load_alarm


@pytest.fixture(scope="session")
def alarm():
    return load_alarm()


@pytest.fixture
def xy_vars():
    return (Variable("X", 2), Variable("Y", 2))
