"""Trial-division enumeration with incrementally maintained differences.

For a candidate ``N = 1 (mod 4)`` the test divides ``A(N, p) / 4`` by each
stored prime ``p``, where ``A(N, p) = N - p**2``; for ``N = 3 (mod 4)`` it uses
``B(N, p) = N - p*(p + 2)``.  Consecutive values differ by amounts that do
not depend on ``N``, so each test walks a table of differences instead of
recomputing squares.  The index form does the same over ``k = (N - 3) / 2``
with quarter-size values ``A' = A / 4`` and ``B' = B / 4``.

Both forms consult the primes only up to a *cap*: the smallest composite of
the candidate's class (``p**2`` or ``p*(p + 2)``) not yet reached.  The forms
are isomorphic, so they perform exactly the same number of modulo
operations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from oddsieve.index_core import _u64
from oddsieve.result import PrimeList

# class slots: 0 holds the N = 1 (mod 4) state (A, Cap1), 1 the N = 3 (mod 4) state (B, Cap2)
CLASS_1 = 0
CLASS_3 = 1


def f_A(p: int) -> int:
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p must be odd and >= 3, got {p}")
    return _u64(p * p)


def f_B(p: int) -> int:
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p must be odd and >= 3, got {p}")
    return _u64(p * (p + 2))


def a_value(n: int, p: int) -> int:
    return n - f_A(p)


def b_value(n: int, p: int) -> int:
    return n - f_B(p)


def a_index_value(k: int, i: int) -> int:
    """``A'(k, i) = (k - 3)/2 - i(i + 3)`` for odd ``k``."""
    if k % 2 == 0:
        raise ValueError(f"A' is defined for odd indices, got {k}")
    return (k - 3) // 2 - i * (i + 3)


def b_index_value(k: int, i: int) -> int:
    """``B'(k, i) = (k - 6)/2 - i(i + 4)`` for even ``k``."""
    if k % 2:
        raise ValueError(f"B' is defined for even indices, got {k}")
    return (k - 6) // 2 - i * (i + 4)


def g_prime(k: int) -> int:
    """Starting value ``g'_A(k)`` or ``g'_B(k)`` of the index test for ``k``."""
    return (k - 3) // 2 if k % 2 else (k - 6) // 2


def _check_pair(lo: int, hi: int) -> None:
    if lo >= hi:
        raise ValueError(f"expected an increasing pair, got ({lo}, {hi})")


def delta_A(p: int, p2: int) -> int:
    _check_pair(p, p2)
    alpha = p2 - p
    return _u64(alpha * (alpha + 2 * p))


def delta_B(p: int, p2: int) -> int:
    return delta_A(p, p2) + 2 * (p2 - p)


def delta_A_index(i: int, i2: int) -> int:
    _check_pair(i, i2)
    alpha = i2 - i
    return _u64(alpha * (alpha + 2 * i + 3))


def delta_B_index(i: int, i2: int) -> int:
    return delta_A_index(i, i2) + (i2 - i)


@njit(cache=True, inline="always")
def _local_test_number(n, cls, primes, n_primes, delta, cursor, cap):
    if n == cap[cls]:
        return False, 0
    while n > cap[cls]:
        r = cursor[cls] + 1
        if r >= n_primes:
            raise RuntimeError("delta tables hold too few primes for this candidate")
        alpha = primes[r] - primes[r - 1]
        d = alpha * (alpha + 2 * primes[r - 1])
        if cls == 1:
            d += 2 * alpha
        delta[cls, r] = d
        cursor[cls] = r
        cap[cls] += d
    v = n - 9 if cls == 0 else n - 15
    ops = 0
    for i in range(cursor[cls] + 1):
        v -= delta[cls, i]
        ops += 1
        if (v >> 2) % primes[i] == 0:
            return False, ops
    return True, ops


@njit(cache=True, inline="always")
def _local_test_index(g, k, cls, primes, indices, n_primes, delta, cursor, cap):
    if k == cap[cls]:
        return False, 0
    while k > cap[cls]:
        r = cursor[cls] + 1
        if r >= n_primes:
            raise RuntimeError("delta tables hold too few primes for this candidate")
        alpha = indices[r] - indices[r - 1]
        d = alpha * (alpha + primes[r - 1])
        if cls == 1:
            d += alpha
        delta[cls, r] = d
        cursor[cls] = r
        # caps live in index space: the index gap between squares is twice the quarter-size delta
        cap[cls] += 2 * d
    rem = g
    ops = 0
    for i in range(cursor[cls] + 1):
        rem -= delta[cls, i]
        ops += 1
        if rem % primes[i] == 0:
            return False, ops
    return True, ops


@njit(cache=True)
def _prime_enumeration(n_max, capacity):
    primes = np.empty(capacity, dtype=np.int64)
    primes[0] = 5
    n_primes = 1
    delta = np.zeros((2, capacity), dtype=np.int64)
    delta[0, 0] = 16
    delta[1, 0] = 20
    cursor = np.zeros(2, dtype=np.int64)
    cap = np.array([25, 35], dtype=np.int64)
    total_ops = 0
    m = 1
    n = 7
    cls = 1
    while n <= n_max:
        ok, ops = _local_test_number(n, cls, primes, n_primes, delta, cursor, cap)
        total_ops += ops
        if ok:
            primes[n_primes] = n
            n_primes += 1
        n = 6 * m + 5
        if n <= n_max:
            ok, ops = _local_test_number(n, cls, primes, n_primes, delta, cursor, cap)
            total_ops += ops
            if ok:
                primes[n_primes] = n
                n_primes += 1
        m += 1
        n = 6 * m + 1
        cls ^= 1
    return primes[:n_primes].copy(), total_ops


@njit(cache=True)
def _index_prime_enumeration(k_max, capacity):
    primes = np.empty(capacity, dtype=np.int64)
    indices = np.empty(capacity, dtype=np.int64)
    primes[0] = 5
    indices[0] = 1
    n_primes = 1
    delta = np.zeros((2, capacity), dtype=np.int64)
    delta[0, 0] = 4
    delta[1, 0] = 5
    cursor = np.zeros(2, dtype=np.int64)
    cap = np.array([11, 16], dtype=np.int64)
    total_ops = 0
    k = 2
    g = -2
    while k <= k_max:
        # four candidates per turn: 3m-1, 3m+1 for m = 2t+1 (even k), then for m = 2t+2 (odd k)
        for step in range(4):
            if step == 1:
                k += 2
                g += 1
            elif step == 2:
                k += 1
                g += 2
            elif step == 3:
                k += 2
                g += 1
            if k > k_max:
                break
            cls = 1 if step < 2 else 0
            ok, ops = _local_test_index(g, k, cls, primes, indices, n_primes, delta, cursor, cap)
            total_ops += ops
            if ok:
                indices[n_primes] = k
                primes[n_primes] = 2 * k + 3
                n_primes += 1
        k += 1
        g -= 1
    return primes[:n_primes].copy(), total_ops


def _capacity(n_max: int) -> int:
    # pi(x) < 1.25506 x / ln x for x > 1
    return int(1.25506 * n_max / math.log(n_max)) + 8


def _finish(odd_primes: np.ndarray, ops: int) -> PrimeList:
    primes = np.concatenate((np.array([2, 3], dtype=np.int64), odd_primes))
    return PrimeList(primes, len(primes), int(ops))


def _check_limit(n_max: int) -> None:
    if n_max < 7 or n_max % 2 == 0:
        raise ValueError(f"n_max must be odd and >= 7, got {n_max}")
    if n_max > 2**62:
        raise OverflowError(f"n_max {n_max} exceeds the 64-bit working range")


def prime_enumeration(n_max: int) -> PrimeList:
    """All primes ``<= n_max``, testing candidates ``6m + 1`` and ``6m + 5``."""
    _check_limit(n_max)
    odd, ops = _prime_enumeration(n_max, _capacity(n_max))
    return _finish(odd, ops)


def index_prime_enumeration(n_max: int) -> PrimeList:
    """Same contract as :func:`prime_enumeration`, iterating odd indices ``3m +- 1``."""
    _check_limit(n_max)
    odd, ops = _index_prime_enumeration((n_max - 3) // 2, _capacity(n_max))
    return _finish(odd, ops)


@dataclass(frozen=True)
class TestOutcome:
    __test__ = False

    is_prime: bool
    modulo_ops: int


@dataclass
class DeltaTables:
    """Mutable prime/difference state shared by successive local tests.

    ``delta[0]`` and ``cursor[0]``/``cap[0]`` track candidates ``= 1 (mod 4)``,
    ``delta[1]`` and ``cursor[1]``/``cap[1]`` those ``= 3 (mod 4)``.  In number
    form the caps are numbers, in index form they are indices.
    """

    index_form: bool = False
    capacity: int = 1024
    primes: np.ndarray = field(init=False)
    prime_indices: np.ndarray = field(init=False)
    delta: np.ndarray = field(init=False)
    cursor: np.ndarray = field(init=False)
    cap: np.ndarray = field(init=False)
    n_primes: int = field(init=False, default=1)

    def __post_init__(self) -> None:
        self.primes = np.zeros(self.capacity, dtype=np.int64)
        self.prime_indices = np.zeros(self.capacity, dtype=np.int64)
        self.delta = np.zeros((2, self.capacity), dtype=np.int64)
        self.primes[0] = 5
        self.prime_indices[0] = 1
        if self.index_form:
            self.delta[:, 0] = (4, 5)
            self.cap = np.array([11, 16], dtype=np.int64)
        else:
            self.delta[:, 0] = (16, 20)
            self.cap = np.array([25, 35], dtype=np.int64)
        self.cursor = np.zeros(2, dtype=np.int64)

    @classmethod
    def with_primes(cls, primes, index_form: bool = False) -> "DeltaTables":
        """Tables preloaded with the given ascending primes ``> 5``."""
        primes = [int(p) for p in primes if p > 5]
        tables = cls(index_form=index_form, capacity=max(16, len(primes) + 8))
        for p in primes:
            tables.add_prime(p)
        return tables

    def add_prime(self, p: int) -> None:
        if p <= self.primes[self.n_primes - 1]:
            raise ValueError(f"primes must be appended in increasing order, got {p}")
        if self.n_primes == self.capacity:
            self._grow()
        self.primes[self.n_primes] = p
        self.prime_indices[self.n_primes] = (p - 3) // 2
        self.n_primes += 1

    def _grow(self) -> None:
        self.capacity *= 2
        self.primes = np.resize(self.primes, self.capacity)
        self.prime_indices = np.resize(self.prime_indices, self.capacity)
        delta = np.zeros((2, self.capacity), dtype=np.int64)
        delta[:, : self.delta.shape[1]] = self.delta
        self.delta = delta

    def cap_values(self) -> tuple[int, int]:
        """Caps recomputed from the cursors; equals ``tuple(self.cap)`` when sound."""
        p1 = int(self.primes[self.cursor[0]])
        p2 = int(self.primes[self.cursor[1]])
        caps = (p1 * p1, p2 * (p2 + 2))
        if self.index_form:
            return tuple((c - 3) // 2 for c in caps)
        return caps


def _candidate_ok(n: int) -> bool:
    return n >= 7 and n % 2 == 1 and n % 3 != 0


def local_test_number(n: int, tables: DeltaTables) -> TestOutcome:
    """Primality of ``n`` against the primes stored in ``tables`` (number form)."""
    if tables.index_form:
        raise ValueError("tables are in index form")
    if not _candidate_ok(n):
        raise ValueError(f"candidate must be >= 7 and coprime to 6, got {n}")
    cls = CLASS_3 if n & 2 else CLASS_1
    ok, ops = _local_test_number(
        n, cls, tables.primes, tables.n_primes, tables.delta, tables.cursor, tables.cap
    )
    return TestOutcome(bool(ok), int(ops))


def local_test_index(g: int, k: int, tables: DeltaTables) -> TestOutcome:
    """Primality of ``2k + 3`` from the running value ``g`` (index form)."""
    if not tables.index_form:
        raise ValueError("tables are in number form")
    if not _candidate_ok(2 * k + 3):
        raise ValueError(f"index must be >= 2 with 2k + 3 coprime to 3, got {k}")
    if g != g_prime(k):
        raise ValueError(f"g must be g'(k) = {g_prime(k)} for k = {k}, got {g}")
    cls = CLASS_1 if k & 1 else CLASS_3
    ok, ops = _local_test_index(
        g,
        k,
        cls,
        tables.primes,
        tables.prime_indices,
        tables.n_primes,
        tables.delta,
        tables.cursor,
        tables.cap,
    )
    return TestOutcome(bool(ok), int(ops))
