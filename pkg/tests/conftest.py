import pytest

from oddsieve import oracle


@pytest.fixture(scope="session")
def primes_1e4():
    return oracle.eratosthenes(10_000).primes


@pytest.fixture(scope="session")
def prime_set_1e5():
    return set(oracle.eratosthenes(100_000).primes.tolist())
