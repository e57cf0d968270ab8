import pytest

from fracsum.numerics import DOUBLE, QUAD, make_context


@pytest.fixture(scope="session")
def qctx():
    return make_context(QUAD)


@pytest.fixture(scope="session")
def dctx():
    return make_context(DOUBLE)
