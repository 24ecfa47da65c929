import pytest

from f4e8 import embedding, gf
from f4e8.chevgroup import EmbeddedF4


@pytest.fixture(scope="session")
def table():
    return embedding.load_embedding()


@pytest.fixture(scope="session")
def alg():
    return embedding.ambient_algebra()


@pytest.fixture(scope="session")
def basis(alg, table):
    return embedding.build_f4_basis(alg, table)


@pytest.fixture(scope="session")
def group3(basis, table):
    return EmbeddedF4(basis, table, gf.GF3)


@pytest.fixture(scope="session")
def group9(basis, table):
    return EmbeddedF4(basis, table, gf.GF9)
