import pytest
from mpmath import mp

from klperiods.highprec import DEFAULT_CTX
from klperiods.moments import default_engine


@pytest.fixture(scope="session")
def ctx():
    return DEFAULT_CTX


@pytest.fixture(scope="session")
def engine(ctx):
    return default_engine(ctx)


@pytest.fixture
def hp(ctx):
    # run the test body at working precision
    with mp.workprec(ctx.work_bits):
        yield
