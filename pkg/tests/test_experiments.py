import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from xy1bench import experiments as ex
from xy1bench.arith import InvalidArgument
from xy1bench.weights import Kind, SieveSupport


@pytest.fixture(scope="module")
def report():
    return ex.goldbach_scan(20000)


def test_small_representation_counts(report):
    r = report.rep_counts
    assert (r[8], r[10], r[12]) == (1, 1, 0)
    assert report.exceptions[:5] == [12, 18, 66, 108, 128]


def test_binary_against_pair_search(report):
    _, mask = ex._p_table(report.N)
    r = report.rep_counts
    for n in range(4, 3000, 2):
        brute = sum(1 for p in range(2, n // 2 + 1) if mask[p] and mask[n - p])
        assert r[n] == brute
        assert (ex.find_representation(n, mask) is None) == (brute == 0)
    assert ex.verify_exceptions(report) and report.obstructed_ok


def test_ternary_against_search():
    rep = ex.goldbach_scan(3000, ternary=True)
    _, mask = ex._p_table(3000)
    ps = np.flatnonzero(mask).tolist()
    for n in range(7, 400, 2):
        brute = any(mask[n - p - q] for p in ps for q in ps if p <= q and n - p - q >= q)
        assert bool(rep.rep_counts[n]) == brute
    assert rep.exceptions == []


def test_scan_limits():
    with pytest.raises(InvalidArgument):
        ex.goldbach_scan(2 * 10**6, ternary=True)


def test_statistic_quartiles(report):
    blocks = ex.normalized_rep_statistic(report, 1024, 16384)
    assert [(b.lo, b.hi) for b in blocks] == [(1024, 2048), (2048, 4096), (4096, 8192), (8192, 16384)]
    for b in blocks:
        n, v = ex.normalized_values(report.rep_counts, b.lo, b.hi)
        assert b.count == v.size and b.median == pytest.approx(float(np.median(v)))
        assert b.q1 <= b.median <= b.q3
    assert ex.normalized_rep_statistic(report, 500, 500) == []
    assert ex.summarize(np.array([]), 0, 1) is None


def test_ap3():
    assert ex.ap3_count(1000) == ex.ap3_bruteforce(1000) == 16
    for N in (50, 200, 600):
        assert ex.ap3_count(N) == ex.ap3_bruteforce(N)


def test_alphap_scan():
    s = ex.alphap_scan(math.sqrt(2), 0.0, 1 / 80, [10**4, 10**5])
    assert s.counts[0] < s.counts[1]
    # as theta shrinks the condition becomes trivial and every prime in P qualifies
    loose = ex.alphap_scan(math.sqrt(2), 0.0, 1e-9, [10**4])
    assert loose.counts[0] == ex._p_table(10**4)[0].size
    tighter = ex.alphap_scan(math.sqrt(2), 0.0, 1 / 10, [10**4])
    assert tighter.counts[0] <= s.counts[0]
    with pytest.raises(InvalidArgument):
        ex.alphap_scan(1.0, 0.0, 0.0, [10])


@given(st.lists(st.floats(0, 0.999999), min_size=1, max_size=50))
def test_star_discrepancy_bounds(xs):
    d = ex.star_discrepancy(np.array(xs))
    assert 1 / (2 * len(xs)) - 1e-12 <= d <= 1


def test_convergents():
    assert ex.convergents(Fraction(355, 113), 1000) == [(3, 1), (22, 7), (355, 113)]
    assert ex.convergents(Fraction(103993, 33102), 200) == [(3, 1), (22, 7), (333, 106), (355, 113)]


def test_arc_classes():
    N = 10**6
    assert ex.classify_arc(1 / 3, N, 6).classification == "major"
    arc = ex.classify_arc(math.sqrt(2), N, 6)
    assert arc.classification == "minor" and arc.q == 33461
    assert ex.classify_arc(2 / 35, N, 6).classification == "unclassified"


@pytest.mark.parametrize("kind", list(Kind))
def test_bv_against_bruteforce(kind):
    S = SieveSupport.standard(kind, 600)
    for alpha, b in ((math.sqrt(2), 1), (0.25, 3)):
        r = ex.bv_harness(S, alpha, b, 600)
        assert r.total == ex.bv_bruteforce(S, alpha, b, 600)
        assert all(math.gcd(d, b) == 1 for d, _, _ in r.rows)


def test_bv_chebyshev_anchor():
    # alpha = 0 and only d = 1 in play: the sum is psi(2N - 1) - psi(N - 1)
    S = SieveSupport(Kind.LIN_PLUS, 1000, 1e-9, 1000)
    r = ex.bv_harness(S, 0.0, 1, 1000)
    psi = math.fsum(ex._mangoldt_naive(n) for n in range(1000, 2000))
    assert [d for d, _, _ in r.rows] == [1] and r.total == pytest.approx(psi, rel=1e-12)


def test_bv_rejects_zero_residue():
    with pytest.raises(InvalidArgument):
        ex.bv_harness(SieveSupport.standard(Kind.LIN_PLUS, 100), 0.5, 0, 100)
