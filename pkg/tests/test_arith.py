import random

import pytest

from powerprog.arith import (
    PowerWitness,
    int_nth_root,
    is_prime,
    kth_power_base,
    primes_below,
)


def test_int_nth_root_exact_values():
    assert int_nth_root(6241, 2) == (79, True)
    assert int_nth_root(3125, 5) == (5, True)
    assert int_nth_root(3124, 5) == (4, False)
    assert int_nth_root(0, 3) == (0, True)
    assert int_nth_root(1, 9) == (1, True)


def test_int_nth_root_round_trip():
    rng = random.Random(20260818)
    for _ in range(500):
        b = rng.randrange(0, 1001)
        k = rng.randrange(2, 12)
        x = b ** k
        assert int_nth_root(x, k) == (b, True)
        if x > 1:
            r, exact = int_nth_root(x - 1, k)
            assert not exact and r == b - 1 if x - 1 < x else True
            assert r ** k <= x - 1 < (r + 1) ** k


def test_int_nth_root_rejects_bad_input():
    with pytest.raises(ValueError):
        int_nth_root(10, 0)
    with pytest.raises(ValueError):
        int_nth_root(-1, 2)


def test_kth_power_base_signs():
    assert kth_power_base(32, 5) == 2
    assert kth_power_base(-243, 5) == -3
    assert kth_power_base(-4, 2) is None
    assert kth_power_base(0, 7) == 0
    assert kth_power_base(36, 2) == 6
    assert kth_power_base(37, 2) is None
    with pytest.raises(ValueError):
        kth_power_base(8, 1)


def test_power_witness_validation():
    w = PowerWitness(value=6241, exponent=2, base=79)
    assert w.base ** w.exponent == w.value
    with pytest.raises(ValueError):
        PowerWitness(value=10, exponent=2, base=3)
    with pytest.raises(ValueError):
        PowerWitness(value=4, exponent=2, base=-2)
    PowerWitness(value=-8, exponent=3, base=-2)


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(7919)
    assert not is_prime(7917)


def test_primes_below_agrees_with_trial_division():
    ps = primes_below(2000)
    assert ps[:5] == [2, 3, 5, 7, 11]
    assert ps == [n for n in range(2000) if is_prime(n)]
