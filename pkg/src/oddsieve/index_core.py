"""Odd-number indexation.

Every odd number ``n >= 3`` is identified with its index ``k = (n - 3) // 2``,
so that ``3, 5, 7, 9, ...`` map to ``0, 1, 2, 3, ...``.  Indices of composite
odd numbers are exactly the terms of two families of arithmetic progressions,
one per residue class of ``n`` modulo 4.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

U64_MAX = 2**64 - 1

OddNumber = int
OddIndex = int


class ResidueClass(enum.Enum):
    MOD4_EQ_1 = 1
    MOD4_EQ_3 = 3


class Family(enum.Enum):
    """Progression family: S1 covers composites ``= 1 (mod 4)``, S2 those ``= 3 (mod 4)``."""

    S1 = 1
    S2 = 2


@dataclass(frozen=True)
class SequenceSpec:
    i: int
    family: Family
    first_term: int
    step: int

    def terms(self, k_max: int) -> range:
        return range(self.first_term, k_max + 1, self.step)


def _u64(value: int) -> int:
    if value < 0 or value > U64_MAX:
        raise OverflowError(f"{value} does not fit in an unsigned 64-bit integer")
    return value


def index_of(n: OddNumber) -> OddIndex:
    if n < 3 or n % 2 == 0:
        raise ValueError(f"index_of expects an odd number >= 3, got {n}")
    return (n - 3) // 2


def number_of(k: OddIndex) -> OddNumber:
    if k < 0:
        raise ValueError(f"index must be non-negative, got {k}")
    return _u64(2 * k + 3)


def residue_class(k: OddIndex) -> ResidueClass:
    """Class of ``2k + 3`` modulo 4; odd indices are the ``1 (mod 4)`` ones."""
    if k < 0:
        raise ValueError(f"index must be non-negative, got {k}")
    return ResidueClass.MOD4_EQ_1 if k & 1 else ResidueClass.MOD4_EQ_3


def sequence_spec(i: OddIndex, family: Family) -> SequenceSpec:
    """Progression of composite indices generated by ``p = 2i + 3``.

    With ``k_i(x) = (2i + 3) x + i``, the S1 progression starts at
    ``k_i(i + 1)`` (the index of ``p**2``) and the S2 progression at
    ``k_i(i + 2)`` (the index of ``p * (p + 2)``); both step by ``2p``.
    """
    if i < 0:
        raise ValueError(f"generator index must be non-negative, got {i}")
    p = 2 * i + 3
    x = i + 1 if family is Family.S1 else i + 2
    return SequenceSpec(i=i, family=family, first_term=_u64(p * x + i), step=_u64(2 * p))


def composite_indices_up_to(k_max: OddIndex, restrict_to_prime_generators: bool = True) -> list[int]:
    """Sorted indices ``k <= k_max`` with ``2k + 3`` composite.

    Generators run while their first S1 term (the square index) stays within
    ``k_max``.  With ``restrict_to_prime_generators`` only prime indices are
    used as generators; a composite generator index is always marked by a
    smaller generator before it is reached, so the sweep can test it in place.
    """
    if k_max < 0:
        raise ValueError(f"k_max must be non-negative, got {k_max}")
    marks = np.zeros(k_max + 1, dtype=bool)
    i = 0
    while square_index(i) <= k_max:
        if not (restrict_to_prime_generators and marks[i]):
            for family in (Family.S1, Family.S2):
                spec = sequence_spec(i, family)
                marks[spec.first_term :: spec.step] = True
        i += 1
    return np.flatnonzero(marks).tolist()


def square_index(k: OddIndex) -> OddIndex:
    """Index of ``(2k + 3)**2``, i.e. ``2k**2 + 6k + 3``."""
    if k < 0:
        raise ValueError(f"index must be non-negative, got {k}")
    return _u64(2 * k * k + 6 * k + 3)


def square_index_delta(alpha: int, n1: OddNumber) -> int:
    """Gap between the indices of ``n1**2`` and ``(n1 + 2*alpha)**2``."""
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    return _u64(2 * alpha * alpha + 2 * alpha * n1)


def multiple_index_delta(alpha: int, m: int) -> int:
    """Gap between the indices of ``n1 * m`` and ``(n1 + 2*alpha) * m``."""
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    if m < 1 or m % 2 == 0:
        raise ValueError(f"multiplier must be odd and positive, got {m}")
    return _u64(alpha * m)
