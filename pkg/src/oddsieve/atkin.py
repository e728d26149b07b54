"""Sieve of Atkin over numbers and over odd indices.

A square-free ``n > 3`` is prime iff it has an odd number of representations

* ``n = 4x^2 + y^2`` with ``n mod 12 in {1, 5}``,
* ``n = 3x^2 + y^2`` with ``n mod 12 == 7``, or
* ``n = 3x^2 - y^2`` (``x > y``) with ``n mod 12 == 11``.

The index variant toggles slots ``k = (n - 3) / 2`` directly, with the
filters rewritten as ``k mod 6 in {1, 5}``, ``== 2`` and ``== 4``.

Toggling is written as ``acc[slot] += 1``: on a ``uint8`` accumulator the
parity is the sieve flag, on an ``int64`` accumulator the value is the exact
number of representations found, which the tests compare across variants.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from oddsieve.result import PrimeList


class Domain(enum.Enum):
    NUMBERS = "numbers"
    INDICES = "indices"


class Form(enum.IntFlag):
    FORM_4X2_PLUS_Y2 = 1
    FORM_3X2_PLUS_Y2 = 2
    FORM_3X2_MINUS_Y2 = 4


@dataclass(frozen=True)
class ResidueCaseTable:
    """Which quadratic forms can hit a candidate, keyed by ``(x mod 12, y mod 12)``."""

    mask: np.ndarray  # (12, 12) uint8 of Form bits

    def cases(self, a: int, b: int) -> frozenset[Form]:
        bits = int(self.mask[a, b])
        return frozenset(f for f in Form if bits & f)


@dataclass(frozen=True)
class SieveArray:
    flags: np.ndarray
    domain: Domain
    limit: int


@functools.lru_cache(maxsize=None)
def residue_case_table() -> ResidueCaseTable:
    mask = np.zeros((12, 12), dtype=np.uint8)
    for a in range(12):
        for b in range(12):
            opposite = (a + b) % 2 == 1
            if b % 2 == 1 and (4 * a * a + b * b) % 12 in (1, 5):
                mask[a, b] |= Form.FORM_4X2_PLUS_Y2
            if opposite and (3 * a * a + b * b) % 12 == 7:
                mask[a, b] |= Form.FORM_3X2_PLUS_Y2
            if opposite and (3 * a * a - b * b) % 12 == 11:
                mask[a, b] |= Form.FORM_3X2_MINUS_Y2
    mask.setflags(write=False)
    return ResidueCaseTable(mask)


def _bounds(n_max: int) -> tuple[int, int]:
    # generous on purpose; every candidate is range-checked below
    return math.isqrt(n_max // 2) + 1, math.isqrt(n_max) + 1


# slots per block: the toggles of one block stay cache resident
SEGMENT = 1 << 17


@njit(cache=True)
def _isqrt(v):
    if v <= 0:
        return 0
    r = int(math.sqrt(v))
    while r * r > v:
        r -= 1
    while (r + 1) * (r + 1) <= v:
        r += 1
    return r


@njit(cache=True)
def _first_y(base, lo, parity):
    """Smallest ``y >= 1`` of the given parity with ``base + y*y >= lo``."""
    y = 1
    if lo > base:
        y = _isqrt(lo - base - 1) + 1
    if y % 2 != parity:
        y += 1
    return y


@njit(cache=True)
def _toggle_block(acc, lo, hi, index_domain):
    # every (x, y) with lo <= n < hi, where n is a number and lo, hi are numbers too;
    # in the index domain slot k = (n - 3) / 2 is toggled with the mod 6 filters
    x = 1
    while 4 * x * x + 1 < hi:
        xx = 4 * x * x
        y = _first_y(xx, lo, 1)
        n = xx + y * y
        while n < hi:
            if index_domain:
                k = (n - 3) >> 1
                r = k % 6
                if r == 1 or r == 5:
                    acc[k] += 1
            else:
                r = n % 12
                if r == 1 or r == 5:
                    acc[n] += 1
            y += 2
            n = xx + y * y
        x += 1
    x = 1
    while 3 * x * x + 1 < hi:
        xx = 3 * x * x
        y = _first_y(xx, lo, (x + 1) % 2)
        n = xx + y * y
        while n < hi:
            if index_domain:
                k = (n - 3) >> 1
                if k % 6 == 2:
                    acc[k] += 1
            elif n % 12 == 7:
                acc[n] += 1
            y += 2
            n = xx + y * y
        x += 1
    x = 2
    while 2 * x * x + 2 * x - 1 < hi:
        xx = 3 * x * x
        # y runs down from its largest value with n >= lo
        y = x - 1
        if xx - lo < y * y:
            y = _isqrt(xx - lo)
        if y % 2 != (x + 1) % 2:
            y -= 1
        n = xx - y * y
        while y >= 1 and n < hi:
            if index_domain:
                k = (n - 3) >> 1
                if k % 6 == 4:
                    acc[k] += 1
            elif n % 12 == 11:
                acc[n] += 1
            y -= 2
            n = xx - y * y
        x += 1


@njit(cache=True)
def _toggle_numbers(acc, n_max):
    for lo in range(0, n_max, SEGMENT):
        _toggle_block(acc, lo, min(lo + SEGMENT, n_max), False)


@njit(cache=True)
def _toggle_indices(acc, k_max):
    for k_lo in range(0, k_max, SEGMENT):
        k_hi = min(k_lo + SEGMENT, k_max)
        _toggle_block(acc, 2 * k_lo + 3, 2 * k_hi + 3, True)


@njit(cache=True)
def _toggle_tabled(acc, n_max, x_max, y_max, mask, index_domain):
    for a in range(12):
        for b in range(12):
            cell = mask[a, b]
            if cell == 0:
                continue
            x_start = a if a > 0 else 12
            y_start = b if b > 0 else 12
            for x in range(x_start, x_max + 1, 12):
                xx = x * x
                for y in range(y_start, y_max + 1, 12):
                    yy = y * y
                    if cell & 1:
                        n = 4 * xx + yy
                        if n < n_max:
                            acc[(n - 3) >> 1 if index_domain else n] += 1
                    if cell & 2:
                        n = 3 * xx + yy
                        if n < n_max:
                            acc[(n - 3) >> 1 if index_domain else n] += 1
                    if cell & 4 and x > y:
                        n = 3 * xx - yy
                        if n < n_max:
                            acc[(n - 3) >> 1 if index_domain else n] += 1


@njit(cache=True)
def _finish_numbers(acc, n_max, root):
    for n in range(5, root + 1, 2):
        if acc[n] & 1:
            sq = n * n
            for i in range(sq, n_max, 2 * sq):
                acc[i] = 0
    count = 0
    for n in range(5, n_max, 2):
        if acc[n] & 1:
            count += 1
    out = np.empty(count + 2, dtype=np.int64)
    out[0] = 2
    out[1] = 3
    j = 2
    for n in range(5, n_max, 2):
        if acc[n] & 1:
            out[j] = n
            j += 1
    return out


@njit(cache=True)
def _finish_indices(acc, k_max, root):
    k = 1
    while 2 * k + 3 <= root:
        if acc[k] & 1:
            p = 2 * k + 3
            for i in range(2 * k * k + 6 * k + 3, k_max, p * p):
                acc[i] = 0
        k += 1
    count = 0
    for k in range(1, k_max):
        if acc[k] & 1:
            count += 1
    out = np.empty(count + 2, dtype=np.int64)
    out[0] = 2
    out[1] = 3
    j = 2
    for k in range(1, k_max):
        if acc[k] & 1:
            out[j] = 2 * k + 3
            j += 1
    return out


def _check_number_limit(n_max: int) -> None:
    if n_max <= 3:
        raise ValueError(f"n_max must be > 3, got {n_max}")


def _check_index_limit(n_max: int) -> None:
    if n_max <= 3 or n_max % 2 == 0:
        raise ValueError(f"n_max must be odd and > 3, got {n_max}")


def _accumulator(size: int, dtype) -> np.ndarray:
    return np.zeros(max(size, 1), dtype=dtype)


def _run_toggles(n_max: int, domain: Domain, tabled: bool, dtype) -> np.ndarray:
    x_max, y_max = _bounds(n_max)
    if domain is Domain.NUMBERS:
        acc = _accumulator(n_max, dtype)
        if tabled:
            _toggle_tabled(acc, n_max, x_max, y_max, residue_case_table().mask, False)
        else:
            _toggle_numbers(acc, n_max)
    else:
        acc = _accumulator((n_max - 3) // 2, dtype)
        if tabled:
            _toggle_tabled(acc, n_max, x_max, y_max, residue_case_table().mask, True)
        else:
            _toggle_indices(acc, (n_max - 3) // 2)
    return acc


def toggle_counts(n_max: int, domain: Domain = Domain.NUMBERS, tabled: bool = False) -> np.ndarray:
    """Number of accepted quadratic-form representations per slot, before square removal."""
    (_check_number_limit if domain is Domain.NUMBERS else _check_index_limit)(n_max)
    return _run_toggles(n_max, domain, tabled, np.int64)


def sieve_array(n_max: int, domain: Domain = Domain.NUMBERS) -> SieveArray:
    """Flags after the toggling phase: set where the representation count is odd."""
    counts = toggle_counts(n_max, domain)
    return SieveArray(flags=(counts & 1).astype(bool), domain=domain, limit=n_max)


def _run(n_max: int, domain: Domain, tabled: bool) -> PrimeList:
    acc = _run_toggles(n_max, domain, tabled, np.uint8)
    root = math.isqrt(n_max - 1)
    if domain is Domain.NUMBERS:
        primes = _finish_numbers(acc, n_max, root)
    else:
        primes = _finish_indices(acc, (n_max - 3) // 2, root)
    return PrimeList(primes, len(primes))


def sieve_of_atkin(n_max: int) -> PrimeList:
    """All primes ``< n_max``."""
    _check_number_limit(n_max)
    return _run(n_max, Domain.NUMBERS, tabled=False)


def index_sieve_of_atkin(n_max: int) -> PrimeList:
    """All primes ``< n_max`` (odd), sieving an array of ``(n_max - 3) / 2`` index slots."""
    _check_index_limit(n_max)
    return _run(n_max, Domain.INDICES, tabled=False)


def sieve_of_atkin_tabled(n_max: int, use_index_domain: bool = False) -> PrimeList:
    """Atkin sieve walking ``(x, y)`` in 12x12 residue blocks; no per-candidate modulo."""
    domain = Domain.INDICES if use_index_domain else Domain.NUMBERS
    (_check_index_limit if use_index_domain else _check_number_limit)(n_max)
    return _run(n_max, domain, tabled=True)
