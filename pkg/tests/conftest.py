import pytest

from symdyn.verify import worked_example_oracle, parity_oracle, totality_oracle


@pytest.fixture
def worked():
    return worked_example_oracle()


@pytest.fixture
def parity():
    return parity_oracle()


@pytest.fixture
def totality():
    return totality_oracle()
