import pytest

from loewnerlab.instance import shutdown_lab


@pytest.fixture(autouse=True)
def fresh_lab():
    shutdown_lab()
    yield
    shutdown_lab()
