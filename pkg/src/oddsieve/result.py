from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PrimeList:
    """Ascending primes plus their count.

    ``modulo_ops`` is filled in by the instrumented trial-division
    enumerators and left as ``None`` by the sieves.
    """

    primes: np.ndarray
    count: int
    modulo_ops: int | None = None

    def tolist(self) -> list[int]:
        return self.primes.tolist()


OracleResult = PrimeList
