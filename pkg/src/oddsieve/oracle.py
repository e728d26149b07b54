"""Reference prime generation used as ground truth."""
from __future__ import annotations

import math

import numpy as np

from oddsieve.result import PrimeList


def eratosthenes(n_max: int) -> PrimeList:
    """All primes ``<= n_max`` by the plain sieve of Eratosthenes."""
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    flags = np.ones(n_max + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n_max) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    primes = np.flatnonzero(flags).astype(np.int64)
    return PrimeList(primes, len(primes))


def is_prime_naive(n: int) -> bool:
    """Trial division by every integer ``2 .. isqrt(n)``."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def primes_below(n_max: int) -> PrimeList:
    """Oracle for exclusive-bound algorithms: primes ``< n_max``."""
    if n_max <= 2:
        return PrimeList(np.empty(0, dtype=np.int64), 0)
    return eratosthenes(n_max - 1)
