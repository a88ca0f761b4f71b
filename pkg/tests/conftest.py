import pytest

from artifact import corpus


@pytest.fixture(scope="session")
def complexes():
    return corpus.all_complexes()


@pytest.fixture(scope="session")
def graphs():
    return corpus.all_graphs()
