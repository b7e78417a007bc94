import pytest

from greybox_stability import synthetic

SUITE_SEED = 20260808
SUITE_SIZE = 120


@pytest.fixture(scope="session")
def suite():
    """The deterministic synthetic verification suite (shared across tests)."""
    return synthetic.generate_suite(n=SUITE_SIZE, seed=SUITE_SEED)


@pytest.fixture(scope="session")
def small_suite(suite):
    return suite[:24]
