"""Pritchard's wheel sieve, in number space and over odd indices.

The index wheel ``W'_q`` holds the indices of the odd numbers below
``2 * M + 3`` that are coprime to the first ``q`` odd primes, where
``M = 3 * 5 * ... * p_q`` is the index modulus; the number ``1`` of the
classical wheel is stored as its shifted copy ``M - 1``.

A turn lays ``p = p_{q+1}`` copies of the wheel side by side (copy ``m``
shifted by ``m * M``) and drops, from each member's column, the single copy
that is a multiple of ``p``.  That copy is read off a table solving
``c + m * M = 0 (mod p)`` for every residue ``c``, so no multiple is ever
searched for.  Once ``M`` exceeds the index range the wheel stops growing and
multiples of each further prime are merged out of the sorted member array.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numba import njit

from oddsieve.index_core import _u64
from oddsieve.result import PrimeList


@dataclass
class Wheel:
    members: np.ndarray
    modulus: int
    q: int

    def __len__(self) -> int:
        return len(self.members)

    def numbers(self) -> np.ndarray:
        return 2 * self.members + 3


@dataclass(frozen=True)
class DiophantineTable:
    prime: int
    modulus: int
    solutions: np.ndarray


@dataclass
class WheelState:
    """Recorded primes and the wheel they were harvested from.

    ``prime_indices[j]`` is the index of the odd prime ``primes[j + 1]`` and
    ``square_indices[j]`` the index of its square; slot 0 of ``primes`` is 2.
    """

    k_max: int
    wheel: Wheel
    primes: np.ndarray
    prime_indices: np.ndarray
    square_indices: np.ndarray
    count: int
    alive: np.ndarray | None = None

    @classmethod
    def initial(cls, k_max: int, capacity: int | None = None) -> "WheelState":
        if capacity is None:
            capacity = _capacity(2 * k_max + 3)
        primes = np.zeros(capacity, dtype=np.int64)
        indices = np.zeros(capacity, dtype=np.int64)
        squares = np.zeros(capacity, dtype=np.int64)
        primes[:4] = (2, 3, 5, 7)
        indices[:3] = (0, 1, 2)
        squares[:3] = (3, 11, 23)
        wheel = Wheel(np.array([1, 2], dtype=np.int64), modulus=3, q=1)
        return cls(k_max, wheel, primes, indices, squares, count=4)

    @property
    def n_odd(self) -> int:
        return self.count - 1

    @property
    def last_index(self) -> int:
        return int(self.prime_indices[self.n_odd - 1])

    def next_prime(self) -> tuple[int, int] | None:
        """``(p_{q+1}, its index)`` for the current generation, if already recorded."""
        q = self.wheel.q
        if q >= self.n_odd:
            return None
        i = int(self.prime_indices[q])
        return 2 * i + 3, i

    def result(self) -> PrimeList:
        primes = self.primes[: self.count].copy()
        return PrimeList(primes, self.count)


def _capacity(n_max: int) -> int:
    return int(1.25506 * n_max / math.log(n_max)) + 8


def diophantine_solutions(p: int, pi_q: int) -> DiophantineTable:
    """Multiplier ``m_c`` with ``c + m_c * pi_q = 0 (mod p)`` for each residue ``c``.

    Built additively: ``c_1 = p - (pi_q mod p)`` solves ``m = 1`` and the
    residue for ``m`` is ``m * c_1 mod p``.
    """
    if math.gcd(p, pi_q) != 1:
        raise ValueError(f"{p} and {pi_q} are not coprime")
    c1 = p - pi_q % p
    solutions = np.zeros(p, dtype=np.int64)
    c = 0
    for m in range(1, p):
        c = (c + c1) % p
        solutions[c] = m
    return DiophantineTable(p, pi_q, solutions)


@njit(cache=True)
def _turn(members, prime, prime_index, modulus, k_max, solutions):
    n = members.shape[0]
    drop = np.empty(n, dtype=np.int64)
    counts = np.zeros(prime + 1, dtype=np.int64)
    for j in range(n):
        a = members[j]
        m = solutions[(a - prime_index) % prime]
        drop[j] = m
        for y in range(prime):
            if a + y * modulus > k_max:
                break
            if y != m:
                counts[y + 1] += 1
    for y in range(prime):
        counts[y + 1] += counts[y]
    out = np.empty(counts[prime], dtype=np.int64)
    fill = counts[:prime].copy()
    for j in range(n):
        a = members[j]
        m = drop[j]
        for y in range(prime):
            v = a + y * modulus
            if v > k_max:
                break
            if y != m:
                out[fill[y]] = v
                fill[y] += 1
    return out


def turn_wheel(wheel: Wheel, prime: int, prime_index: int, k_max: int) -> Wheel:
    """``W'_{q+1}`` from ``W'_q``, truncated at ``k_max``.

    Copies are emitted grouped by copy number; each group is increasing and
    lies in its own stretch of width ``M``, so the concatenation is sorted.
    """
    table = diophantine_solutions(prime, wheel.modulus)
    modulus = _u64(wheel.modulus * prime)
    members = _turn(wheel.members, prime, prime_index, wheel.modulus, k_max, table.solutions)
    return Wheel(members, modulus, wheel.q + 1)


def wheel_turn(state: WheelState, prime: int, prime_index: int) -> Wheel:
    return turn_wheel(state.wheel, prime, prime_index, state.k_max)


@njit(cache=True)
def _remove_progression(members, size, start, step):
    # members below start are kept as-is; the rest is merged against start + j*step
    lo = np.searchsorted(members[:size], start)
    nxt = start
    w = lo
    for j in range(lo, size):
        v = members[j]
        while v > nxt:
            nxt += step
        if v == nxt:
            nxt += step
        else:
            members[w] = v
            w += 1
    return w


def remove_members(wheel: Wheel, prime: int, square_prime_index: int) -> Wheel:
    """Wheel without the indices ``square_prime_index + j * prime`` (``j >= 0``)."""
    members = wheel.members.copy()
    size = _remove_progression(members, len(members), square_prime_index, prime)
    return Wheel(members[:size], wheel.modulus, wheel.q + 1)


def remove_multiples(state: WheelState, prime: int, square_prime_index: int) -> Wheel:
    return remove_members(state.wheel, prime, square_prime_index)


@njit(cache=True)
def _strike_progression(members, alive, start, step):
    """Clear ``alive`` at members equal to ``start + j*step``; returns how many were cleared.

    Same merge as :func:`_remove_progression`, but runs of members below the
    next multiple are skipped by galloping instead of one by one, and removal
    is deferred to a later compaction.
    """
    size = members.shape[0]
    if size == 0:
        return 0
    last = members[size - 1]
    j = np.searchsorted(members, start)
    nxt = start
    struck = 0
    while j < size and nxt <= last:
        v = members[j]
        if v < nxt:
            lo = j
            width = 1
            hi = j + 1
            while hi < size and members[hi] < nxt:
                lo = hi
                width *= 2
                hi = lo + width
            if hi > size:
                hi = size
            while hi - lo > 1:
                mid = (lo + hi) >> 1
                if members[mid] < nxt:
                    lo = mid
                else:
                    hi = mid
            j = hi
            continue
        if v == nxt:
            if alive[j]:
                alive[j] = 0
                struck += 1
            j += 1
        nxt += step
    return struck


@njit(cache=True)
def _append_primes(members, alive, use_alive, lo, hi, primes, indices, squares, count):
    for j in range(lo, hi):
        if use_alive and not alive[j]:
            continue
        prev = indices[count - 2]
        alpha = members[j] - prev
        n1 = primes[count - 1]
        indices[count - 1] = members[j]
        squares[count - 1] = squares[count - 2] + 2 * alpha * alpha + 2 * alpha * n1
        primes[count] = n1 + 2 * alpha
        count += 1
    return count


_NO_MASK = np.ones(1, dtype=np.uint8)


def _harvest(state: WheelState, boundary: int) -> None:
    members = state.wheel.members
    lo = int(np.searchsorted(members, state.last_index, side="right"))
    hi = int(np.searchsorted(members, boundary, side="left"))
    fresh = hi - lo if state.alive is None else int(state.alive[lo:hi].sum())
    if fresh > len(state.primes) - state.count:
        raise RuntimeError("wheel state capacity exhausted")
    alive = _NO_MASK if state.alive is None else state.alive
    state.count = int(
        _append_primes(
            members, alive, state.alive is not None, lo, hi, state.primes, state.prime_indices, state.square_indices, state.count
        )
    )


def get_new_primes(state: WheelState) -> WheelState:
    """Record wheel members that are certainly prime.

    Window: after the last recorded prime and below the index of ``p_q**2``,
    the square of the prime most recently sieved out, limited to the span
    the wheel actually covers.  Updates ``state`` in place and returns it.
    """
    span_end = min(state.wheel.modulus - 1, state.k_max)
    boundary = min(int(state.square_indices[state.wheel.q - 1]), span_end + 1)
    _harvest(state, boundary)
    return state


def _check_limit(n_max: int, odd: bool) -> None:
    if n_max <= 9 or (odd and n_max % 2 == 0):
        kind = "odd and " if odd else ""
        raise ValueError(f"n_max must be {kind}> 9, got {n_max}")
    if n_max > 2**62:
        raise OverflowError(f"n_max {n_max} exceeds the 64-bit working range")


def index_wheel_sieve(n_max: int, trace: list | None = None) -> PrimeList:
    """All primes ``<= n_max`` (odd, ``> 9``) by the index wheel sieve.

    ``trace``, when given, receives every intermediate :class:`Wheel`.
    """
    _check_limit(n_max, odd=True)
    k_max = (n_max - 3) // 2
    state = WheelState.initial(k_max)
    # inflation: keep turning until the wheel spans [0, k_max]
    while True:
        prime, prime_index = state.next_prime()
        state.wheel = wheel_turn(state, prime, prime_index)
        if trace is not None:
            trace.append(state.wheel)
        get_new_primes(state)
        if state.wheel.modulus > k_max:
            break
    # deflation: merge out multiples of each prime whose square is in range
    state.alive = np.ones(len(state.wheel.members), dtype=np.uint8)
    dead = 0
    while True:
        nxt = state.next_prime()
        if nxt is None:
            break
        prime, prime_index = nxt
        square = int(state.square_indices[state.wheel.q])
        if square > k_max:
            break
        dead += _strike_progression(state.wheel.members, state.alive, square, prime)
        members = state.wheel.members
        if 2 * dead > len(members):
            members = members[state.alive.view(bool)]
            state.alive = np.ones(len(members), dtype=np.uint8)
            dead = 0
        state.wheel = Wheel(members, state.wheel.modulus, state.wheel.q + 1)
        if trace is not None:
            trace.append(Wheel(members[state.alive.view(bool)], state.wheel.modulus, state.wheel.q))
        get_new_primes(state)
    # what is left beyond the last square boundary is prime as well
    _harvest(state, k_max + 1)
    return state.result()


def _turn_numbers(wheel: np.ndarray, modulus: int, p: int, limit: int) -> np.ndarray:
    """``p`` shifted copies of a number wheel, capped at ``limit``, minus the multiples of ``p``."""
    copies = min(p, limit // modulus + 1)
    grown = (wheel[None, :] + modulus * np.arange(copies, dtype=np.int64)[:, None]).ravel()
    grown = grown[grown <= limit]
    struck = np.zeros(limit + 1, dtype=bool)
    struck[p::p] = True
    return grown[~struck[grown]]


def classical_wheel(q: int) -> np.ndarray:
    """``W_q``: residues in ``[1, 2 * 3 * ... * p_q)`` coprime to every prime up to ``p_q``.

    ``q`` counts odd primes, so ``W_1 = {1, 5}`` and ``W_2`` has modulus 30.
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    wheel = np.array([1, 5], dtype=np.int64)
    modulus = 6
    for _ in range(q - 1):
        p = int(wheel[1])
        wheel = _turn_numbers(wheel, modulus, p, modulus * p - 1)
        modulus *= p
    return wheel


def wheel_sieve_reference(n_max: int) -> PrimeList:
    """All primes ``<= n_max`` by the classical wheel over numbers.

    ``W_q`` holds the residues in ``[1, P_q)`` coprime to ``P_q = 2*3*...*p_q``;
    a turn takes ``p_{q+1}`` shifted copies and removes the multiples of
    ``p_{q+1}``, enumerated directly.  Members of ``W_q`` below ``p_q**2``
    are prime.
    """
    _check_limit(n_max, odd=False)
    primes = [np.array([2, 3], dtype=np.int64)]
    last = 3
    wheel = np.array([1, 5], dtype=np.int64)
    modulus = 6
    p_q = 3
    while True:
        bound = min(p_q * p_q, n_max + 1, modulus)
        fresh = wheel[(wheel > last) & (wheel < bound)]
        if len(fresh):
            primes.append(fresh)
            last = int(fresh[-1])
        if p_q * p_q > n_max:
            break
        p = int(wheel[1]) if len(wheel) > 1 else n_max + 1
        if p > n_max:
            break
        wheel = _turn_numbers(wheel, modulus, p, n_max)
        modulus *= p
        p_q = p
        if modulus > n_max:
            break
    # the wheel now spans [1, n_max]; strike odd multiples from p^2 for the remaining primes
    alive = np.zeros(n_max + 1, dtype=bool)
    alive[wheel] = True
    alive[1] = False
    for p in _alive_after(alive, p_q):
        if p * p > n_max:
            break
        alive[p * p :: 2 * p] = False
    rest = np.flatnonzero(alive[last + 1 :]) + last + 1
    return _collect(primes, rest)


def _alive_after(alive: np.ndarray, after: int):
    """Yield successive set positions ``> after`` of ``alive``, reading lazily."""
    n = after + 1
    size = len(alive)
    while n < size:
        if alive[n]:
            yield n
        n += 1


def _collect(chunks, rest) -> PrimeList:
    primes = np.concatenate(chunks + [rest.astype(np.int64)])
    return PrimeList(primes, len(primes))


def write_wheel(wheel: Wheel, path: str | Path) -> None:
    """Dump ``wheel`` as ``q=<q> pi=<modulus> size=<n>`` followed by one member per line."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"q={wheel.q} pi={wheel.modulus} size={len(wheel)}\n")
        for v in wheel.members.tolist():
            fh.write(f"{v}\n")


def read_wheel(path: str | Path) -> Wheel:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        fields = dict(item.split("=", 1) for item in header)
        members = np.array([int(line) for line in fh if line.strip()], dtype=np.int64)
    if len(members) != int(fields["size"]):
        raise ValueError(f"{path}: header says {fields['size']} members, found {len(members)}")
    return Wheel(members, int(fields["pi"]), int(fields["q"]))


def initial_wheel() -> Wheel:
    """``W'_1 = {1, 2}`` with index modulus 3."""
    return Wheel(np.array([1, 2], dtype=np.int64), modulus=3, q=1)


def untruncated_wheel(q: int) -> Wheel:
    """``W'_q`` in full, turned up from ``W'_1`` with no truncation."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    wheel = initial_wheel()
    while wheel.q < q:
        first = int(wheel.members[0])
        wheel = turn_wheel(wheel, 2 * first + 3, first, k_max=wheel.modulus * (2 * first + 3))
    return wheel
