import pytest
from hypothesis import settings
from mpmath import mp

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def working_precision():
    with mp.workdps(50):
        yield
