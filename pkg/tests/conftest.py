import pytest

from hbacsim import load_preset


@pytest.fixture(scope="session")
def glycine():
    return load_preset("glycine")


@pytest.fixture(scope="session")
def formamide():
    return load_preset("formamide")
