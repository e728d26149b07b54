import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oddsieve import oracle
from oddsieve import trial_division as td
from oddsieve.trial_division import DeltaTables


def test_f_values():
    assert td.f_A(3) == 9
    assert td.f_B(3) == 15
    assert td.f_A(5) == 25


def test_delta_initializers():
    assert td.delta_A(3, 5) == 16
    assert td.delta_B(3, 5) == 20
    assert td.delta_A(5, 7) == 24
    assert td.delta_A_index(0, 1) == 4
    assert td.delta_B_index(0, 1) == 5
    assert td.delta_A_index(1, 2) == 6
    assert 4 * td.delta_A_index(0, 1) == td.delta_A(3, 5)


@pytest.mark.parametrize("fn", [td.delta_A, td.delta_B, td.delta_A_index, td.delta_B_index])
def test_delta_rejects_equal_pair(fn):
    with pytest.raises(ValueError):
        fn(5, 5)


def test_quarter_identity(primes_1e4):
    prime_indices = [(int(p) - 3) // 2 for p in primes_1e4[1:]]
    for k in range(3, 10_001):
        n = 2 * k + 3
        for i in prime_indices:
            p = 2 * i + 3
            if p * p > n:
                break
            if k % 2:
                assert 4 * td.a_index_value(k, i) == td.a_value(n, p)
            else:
                assert 4 * td.b_index_value(k, i) == td.b_value(n, p)


def test_delta_independent_of_n(primes_1e4):
    rng = random.Random(7)
    odd_primes = [int(p) for p in primes_1e4[1:200]]
    for _ in range(100):
        n = rng.randrange(7, 10**9, 2)
        j = rng.randrange(len(odd_primes) - 1)
        p, p2 = odd_primes[j], odd_primes[j + 1]
        assert td.a_value(n, p) - td.a_value(n, p2) == td.delta_A(p, p2)
        assert td.b_value(n, p) - td.b_value(n, p2) == td.delta_B(p, p2)
        i, i2 = (p - 3) // 2, (p2 - 3) // 2
        assert 4 * td.delta_A_index(i, i2) == td.delta_A(p, p2)
        assert 4 * td.delta_B_index(i, i2) == td.delta_B(p, p2)


def test_local_test_number_examples():
    assert not td.local_test_number(25, DeltaTables()).is_prime
    assert td.local_test_number(23, DeltaTables()).is_prime
    assert not td.local_test_number(49, DeltaTables.with_primes([7])).is_prime


@pytest.mark.parametrize("k, expected", [(11, False), (10, True), (16, False)])
def test_local_test_index_examples(k, expected):
    tables = DeltaTables(index_form=True)
    assert td.local_test_index(td.g_prime(k), k, tables).is_prime is expected


def test_local_test_index_rejects_wrong_g():
    with pytest.raises(ValueError):
        td.local_test_index(0, 10, DeltaTables(index_form=True))


def test_local_test_rejects_multiples_of_three():
    with pytest.raises(ValueError):
        td.local_test_number(27, DeltaTables())


def _candidates(n_max):
    return [n for n in range(7, n_max + 1, 2) if n % 3]


@pytest.mark.parametrize("index_form", [False, True])
def test_local_tests_in_order_with_cap_soundness(index_form, prime_set_1e5):
    n_max = 20_000
    support = [p for p in sorted(prime_set_1e5) if 5 < p * p <= 4 * n_max and p > 5]
    tables = DeltaTables.with_primes(support, index_form=index_form)
    for n in _candidates(n_max):
        if index_form:
            k = (n - 3) // 2
            out = td.local_test_index(td.g_prime(k), k, tables)
        else:
            out = td.local_test_number(n, tables)
        assert out.is_prime == (n in prime_set_1e5), n
        assert tuple(int(c) for c in tables.cap) == tables.cap_values()


def test_local_tests_count_the_same_operations(prime_set_1e5):
    support = [p for p in sorted(prime_set_1e5) if 5 < p < 300]
    num = DeltaTables.with_primes(support)
    idx = DeltaTables.with_primes(support, index_form=True)
    for n in _candidates(50_000):
        k = (n - 3) // 2
        a = td.local_test_number(n, num)
        b = td.local_test_index(td.g_prime(k), k, idx)
        assert a == b


@pytest.mark.parametrize("fn", [td.prime_enumeration, td.index_prime_enumeration])
def test_small_limits(fn):
    res = fn(7)
    assert res.tolist() == [2, 3, 5, 7]
    assert res.count == 4
    assert fn(99).count == 25
    assert fn(101).count == 26


def test_forms_agree_at_100():
    assert td.prime_enumeration(101).tolist() == td.index_prime_enumeration(101).tolist()


def test_index_1e5_count():
    assert td.index_prime_enumeration(100_001).count == 9592


def test_number_1e7_count():
    assert td.prime_enumeration(10**7 - 1).count == 664579


@pytest.mark.parametrize("n", [6, 8, 5, 1000])
@pytest.mark.parametrize("fn", [td.prime_enumeration, td.index_prime_enumeration])
def test_rejects_out_of_domain(fn, n):
    with pytest.raises(ValueError):
        fn(n)


def test_exhaustive_agreement_small():
    full = oracle.eratosthenes(10_001).primes
    for n_max in range(7, 10_002, 2):
        want = full[full <= n_max]
        a = td.prime_enumeration(n_max)
        b = td.index_prime_enumeration(n_max)
        assert np.array_equal(a.primes, want), n_max
        assert np.array_equal(b.primes, want), n_max
        assert a.modulo_ops == b.modulo_ops


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=3, max_value=50_000))
def test_agreement_sampled(j):
    n_max = 2 * j + 1
    want = oracle.eratosthenes(n_max).primes
    assert np.array_equal(td.prime_enumeration(n_max).primes, want)
    assert np.array_equal(td.index_prime_enumeration(n_max).primes, want)


@pytest.mark.parametrize("n_max", [999, 1001, 9999, 10_001, 99_999, 100_001])
def test_equal_modulo_counts(n_max):
    a = td.prime_enumeration(n_max)
    b = td.index_prime_enumeration(n_max)
    assert a.modulo_ops == b.modulo_ops > 0
