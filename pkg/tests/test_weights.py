import math

import pytest
from hypothesis import given, settings, strategies as st

from xy1bench import weights
from xy1bench.experiments import _lambda_naive
from xy1bench.weights import Kind, SieveSupport

# support sizes at x = 10^6, theta = 0, eps = 0.01, from the naive filter below
SIZES_1E6 = {Kind.LIN_PLUS: 14, Kind.SEM_MINUS: 71, Kind.SEM_PLUS: 27}


@pytest.mark.parametrize("kind", list(Kind))
@pytest.mark.parametrize("theta", [0.0, 1 / 80])
def test_enumeration_matches_naive_filter(kind, theta):
    S = SieveSupport.standard(kind, 1e6, theta)
    naive = [d for d in range(1, int(S.level) + 1) if _lambda_naive(S, d) != 0]
    assert weights.enumerate_support(S) == naive
    if theta == 0:
        assert len(naive) == SIZES_1E6[kind]


@pytest.mark.parametrize("kind", list(Kind))
def test_weight_sign(kind):
    S = SieveSupport.standard(kind, 1e8)
    for d in weights.enumerate_support(S)[:300]:
        assert weights.weight(S, d) == _lambda_naive(S, d)
    assert weights.weight(S, 4) == 0


def test_chain_rule_example():
    # 13^3 = 2197 exceeds 10^6^0.49 ~ 871, so 13 is not a linear-support member
    S = SieveSupport.standard(Kind.LIN_PLUS, 1e6)
    assert not weights.in_support(S, 13) and weights.in_support(S, 7)
    assert weights.in_support(S, 1)


def test_enumeration_too_large():
    with pytest.raises(MemoryError):
        weights.enumerate_support(SieveSupport.standard(Kind.LIN_PLUS, 1e16))


def test_flags():
    S = SieveSupport(Kind.SEM_MINUS, 1e6, 0.5, 1e6**0.5)
    assert len(S.flags()) == 2
    assert SieveSupport.standard(Kind.SEM_MINUS, 1e6).flags() == []


@given(st.sampled_from(list(Kind)), st.sampled_from([0.0, 1 / 80]), st.sampled_from([1e6, 1e8, 1e10]),
       st.floats(0.0, 1.0))
@settings(max_examples=40, deadline=None)
def test_split_invariants(kind, theta, x, t):
    S = SieveSupport.standard(kind, x, theta)
    lo, hi = weights.split_range(S)
    D = lo * (hi / lo) ** t
    for d in weights.enumerate_support(S):
        r = weights.split(S, d, D)
        assert r.d1 * r.d2 == d and math.gcd(r.d1, r.d2) == 1
        assert weights.split_valid(S, r.d1, r.d2, D)
        assert not r.fallback


def test_scan_splits_counts():
    S = SieveSupport.standard(Kind.SEM_MINUS, 1e10)
    lo, hi = weights.split_range(S)
    scan = weights.scan_splits(S, math.sqrt(lo * hi))
    assert scan.fallbacks == 0 and scan.violations == []


def test_optimality_counterexamples():
    assert weights.optimality_counterexample(Kind.SEM_MINUS, 1e6, 0.0, 0.01) is None
    ce = weights.optimality_counterexample(Kind.SEM_MINUS, 1e12, 0.0, 0.01)
    assert ce.primes == (67, 61, 59)
    assert weights.in_support(ce.support, ce.d)
    assert weights._exhaustive_split(ce.support, list(ce.primes), ce.D) is None
    ce = weights.optimality_counterexample(Kind.SEM_PLUS, 1e9, 1 / 80, 0.01)
    assert ce.primes == (61, 59)
    with pytest.raises(ValueError):
        weights.optimality_counterexample(Kind.LIN_PLUS, 1e12, 0.0, 0.01)


def test_lemma_violation_raised():
    S = SieveSupport(Kind.SEM_MINUS, 1e6, 3 / 7 + 0.03, 1e3)
    with pytest.raises(weights.LemmaViolation):
        weights.split(S, 373, 1e6 ** (3 / 7))
