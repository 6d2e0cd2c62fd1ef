import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from xy1bench import arith
from xy1bench.arith import InvalidArgument

# P and P* on [1, 100] by direct (x, y) search over p - 1
P_UPTO_100 = [2, 3, 5, 11, 17, 19, 37, 41, 53, 59, 73, 83]
PSTAR_UPTO_100 = [2, 3, 11, 59, 83]


def naive_primes(n):
    return [p for p in range(2, n + 1) if all(p % d for d in range(2, math.isqrt(p) + 1))]


def test_prime_counts():
    assert arith.sieve_primes(100).count() == 25
    assert arith.sieve_primes(10**6).count() == 78498


@given(st.integers(2, 5000))
@settings(max_examples=40, deadline=None)
def test_sieve_matches_trial_division(n):
    assert arith.sieve_primes(n).primes().tolist() == naive_primes(n)


def test_segmented_sieve_crosses_segments():
    limit = (1 << 23) + 1001
    T = arith.sieve_primes(limit)
    ps = T.primes()
    near = [p for p in range((1 << 23) - 200, limit + 1) if all(p % d for d in range(2, math.isqrt(p) + 1))]
    assert ps[ps >= (1 << 23) - 200].tolist() == near
    assert T.is_prime(near[0]) and not T.is_prime(near[0] + 1)


def test_is_prime_beyond_limit():
    with pytest.raises(InvalidArgument):
        arith.sieve_primes(100).is_prime(101)


def test_P_and_Pstar_small():
    T = arith.sieve_primes(100)
    assert T.P_primes().tolist() == P_UPTO_100
    assert T.Pstar_primes().tolist() == PSTAR_UPTO_100
    assert [p for p in naive_primes(100) if arith.in_P(p)] == P_UPTO_100
    assert [p for p in naive_primes(100) if arith.in_Pstar(p)] == PSTAR_UPTO_100


def test_membership_needs_prime():
    with pytest.raises(InvalidArgument):
        arith.in_P(9)
    with pytest.raises(InvalidArgument):
        arith.in_Pstar(1)


def test_P_residues_mod_9():
    ps = arith.sieve_primes(10**5).P_primes()
    assert set((ps[ps > 3] % 9).tolist()) == {1, 2, 5, 8}


@given(st.integers(1, 2**62))
@settings(max_examples=60, deadline=None)
def test_factorize_multiplies_back(n):
    f = arith.factorize(n)
    assert math.prod(p**e for p, e in f.factors) == n
    assert all(len(arith.factorize(p).factors) == 1 for p, _ in f.factors if p < 10**7)


def test_factorize_example():
    assert arith.factorize(4324320).factors == ((2, 5), (3, 3), (5, 1), (7, 1), (11, 1), (13, 1))
    assert arith.s_of(4324320) == 77
    assert arith.factorize(1).factors == ()
    with pytest.raises(InvalidArgument):
        arith.factorize(0)


def s_brute(n):
    r = math.isqrt(n)
    for a in range(r + 1):
        b2 = n - a * a
        b = math.isqrt(b2)
        if b * b == b2:
            g = math.gcd(a, b)
            while g % 2 == 0:
                g //= 2
            while g % 3 == 0:
                g //= 3
            if g == 1:
                return True
    return False


@given(st.integers(1, 20000))
@settings(max_examples=300, deadline=None)
def test_in_S_against_search(n):
    assert arith.in_S(n) == s_brute(n)


@given(st.integers(0, 20000))
@settings(max_examples=200, deadline=None)
def test_sum_two_squares_against_search(n):
    r = math.isqrt(n)
    brute = any(math.isqrt(n - a * a) ** 2 == n - a * a for a in range(r + 1))
    assert arith.is_sum_two_squares(n) == brute


@given(st.integers(1, 10**6), st.integers(1, 10**6))
@settings(max_examples=100, deadline=None)
def test_mobius_multiplicative(a, b):
    if math.gcd(a, b) == 1:
        assert arith.mobius(a * b) == arith.mobius(a) * arith.mobius(b)


def test_mangoldt_against_naive():
    lo, hi = 990, 1300
    tab = arith.mangoldt_table(lo, hi)
    for n in range(lo, hi):
        f = arith.factorize(n).factors
        want = math.log(f[0][0]) if len(f) == 1 else 0.0
        assert tab[n - lo] == want
    assert arith.mangoldt_table(0, 3).tolist() == [0.0, 0.0, math.log(2)]


def test_probable_prime_against_sieve():
    T = arith.sieve_primes(200000)
    mask = T.is_prime_mask()
    assert all(arith.is_probable_prime(n) == bool(mask[n]) for n in range(200001))


def test_factorize_large_semiprime():
    p, q = 2147483647, 2147483629          # both prime
    f = arith.factorize(p * q)
    assert f.factors == ((q, 1), (p, 1))
    assert arith.factorize(p * p).factors == ((p, 2),)
