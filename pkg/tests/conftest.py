"""Shared test configuration: high ambient precision for reference values."""

import pytest
from mpmath import mp


@pytest.fixture(autouse=True)
def high_ambient_precision():
    # reference constants in tests must parse at comparable precision to the
    # library's working precision, not mpmath's default 15 digits
    old = mp.dps
    mp.dps = 60
    yield
    mp.dps = old
