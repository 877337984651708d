import pytest
from hypothesis import settings

from multable.sieve import build_table

settings.register_profile("suite", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def table_1e6():
    """Full factorization table over [1, 10^6]; shared by nk and omega tests."""
    return build_table(1, 10**6 + 1)
