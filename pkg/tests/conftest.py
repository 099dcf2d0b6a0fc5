import pytest
from hypothesis import settings

from twocells import imc
from twocells.structfile import load_corpus

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def m2():
    return imc.build_imc(2)


@pytest.fixture(scope="session")
def m3():
    return imc.build_imc(3)


@pytest.fixture(scope="session")
def monoidal():
    return load_corpus("monoidal")


@pytest.fixture(scope="session")
def nested():
    return load_corpus("ex-nested")


@pytest.fixture(scope="session")
def disjoint():
    return load_corpus("ex-disjoint")
