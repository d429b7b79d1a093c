import pytest

import stammerlab as sl

FIB_TEXT = "source 0 1\ntarget 0 1\nmap 0 -> 01\nmap 1 -> 0\nstart 0\n"
TERNARY_TEXT = (
    "source 0 1 2\ntarget 0 1 2\n"
    "map 0 -> 012\nmap 1 -> 12\nmap 2 -> 2\nstart 0\n"
)


@pytest.fixture(scope="session")
def fib_morphism():
    return sl.Morphism.parse(FIB_TEXT)


@pytest.fixture(scope="session")
def fib_word(fib_morphism):
    return sl.fixed_point(fib_morphism, "0")


@pytest.fixture(scope="session")
def ternary_morphism():
    return sl.Morphism.parse(TERNARY_TEXT)


@pytest.fixture(scope="session")
def ternary_word(ternary_morphism):
    return sl.fixed_point(ternary_morphism, "0")


@pytest.fixture(scope="session")
def thue_morse():
    return sl.generate(sl.THUE_MORSE)
