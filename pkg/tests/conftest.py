import pytest

from choicerev import LanguageSpec, UniverseSpec


@pytest.fixture(scope="session")
def lang1():
    return LanguageSpec(1)


@pytest.fixture(scope="session")
def lang2():
    return LanguageSpec(2)


@pytest.fixture(scope="session")
def lang3():
    return LanguageSpec(3)


@pytest.fixture(scope="session")
def u1(lang1):
    return UniverseSpec(lang1, 2)


@pytest.fixture(scope="session")
def u2(lang2):
    return UniverseSpec(lang2, 2)
