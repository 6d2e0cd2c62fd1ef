import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from xy1bench import analytic
from xy1bench.analytic import HParams
from xy1bench.forms import LinearForm


def test_gk15_polynomial_exactness():
    # the Kronrod rule integrates x^k exactly up to degree 22, the Gauss rule up to 13
    for k in range(23):
        want = (1 - (-1) ** (k + 1)) / (k + 1)
        val, _ = analytic.gk15(lambda x: x**k, -1.0, 1.0)
        assert val == pytest.approx(want, abs=1e-14)
    g = 0.5 * analytic.gk15(lambda x: x**14, -1.0, 1.0)[1]
    assert g > 1e-6


def test_integrate_adaptive():
    r = analytic.integrate(lambda x: 1 / np.sqrt(x), 1e-12, 1.0, tol=1e-10)
    assert r.converged and r.value == pytest.approx(2 - 2e-6, abs=1e-8)


@given(st.floats(1 / 3 + 1e-6, 0.5), st.floats(3.0, 4.0))
@settings(max_examples=60, deadline=None)
def test_I1_closed_form(rho2, sigma):
    assert abs(analytic.I1(rho2, sigma).value - analytic.I1_closed(rho2, sigma)) <= 1e-9


def test_I2_against_midpoint():
    for rho1, sigma in ((0.5, 3.0), (0.475, 120 / 37), (0.45, 3.5)):
        q = analytic.I2(rho1, sigma, tol=1e-12).value
        assert abs(q - analytic.I2_midpoint(rho1, sigma, n=10**6)) < 1e-10


def test_H_margins_two_routes():
    for p in (HParams(0.5, 3 / 7, 3.0), HParams(0.475, 0.95 * 3 / 7, 120 / 37)):
        r = analytic.check_H(p, tol=1e-8)
        other = analytic.I1_closed(p.rho2, p.sigma) - analytic.I2_midpoint(p.rho1, p.sigma, n=10**6) - analytic.H_GAP
        assert r.holds and r.margin > 1e-3
        assert abs(r.margin - other) < 1e-8


def test_H_fails_off_range():
    r = analytic.check_H(HParams(1 / 3 + 1e-3, 1 / 3 + 1e-3, 3.001))
    assert not r.holds and r.margin < 0
    assert analytic.check_H(HParams(0.5, 3 / 7, 3.0)).warnings  # boundary instance is flagged


def test_domain_errors():
    with pytest.raises(analytic.DomainError):
        analytic.I1(0.3, 3.0)
    with pytest.raises(analytic.DomainError):
        analytic.I2(0.5, 2.0)
    with pytest.raises(analytic.DomainError):
        analytic.sieve_f(0.5)


def test_sieve_functions():
    assert analytic.sieve_F(2.0) == pytest.approx(math.exp(analytic.EULER_GAMMA), rel=1e-15)
    assert analytic.sieve_F(2.0) == pytest.approx(1.781072418, abs=1e-9)
    for s in (1.0, 1.5, 2.0, 3.0, 5.0):
        closed = math.sqrt(math.exp(analytic.EULER_GAMMA) / (math.pi * s)) * analytic.arcosh_closed(s)
        assert analytic.sieve_f(s) == pytest.approx(closed, abs=1e-12)


def test_frak_f_and_V():
    assert analytic.frak_f(15) == Fraction(8, 3)
    assert analytic.frak_f(2) == 1
    assert analytic.V_sem(20, 1) == Fraction(1, 2) * Fraction(5, 6) * Fraction(9, 10) * Fraction(17, 18)
    assert analytic.V_sem(20, 7) == Fraction(1, 2) * Fraction(9, 10) * Fraction(17, 18)
    assert analytic.V_lin(8, 1, 5) == Fraction(1, 2) * Fraction(5, 6)


def test_euler_products_converge():
    a, b = analytic.euler_products(10**5), analytic.euler_products(10**6)
    assert abs(a.A - b.A) < 1e-6 and abs(a.C41 - b.C41) < 1e-5 and abs(a.C4m1 - b.C4m1) < 1e-5
    # every factor lies in (0, 1)
    assert 0 < b.A < 2**-1.5 and 0 < b.C41 < 1 and 0 < b.C4m1 < 1


def test_singular_product_examples():
    assert analytic.singular_product(LinearForm(1296, 5)) == 3
    assert analytic.singular_product(LinearForm(4, 2)) == 0


@given(st.sampled_from([216, 432, 1296, 4320, 8640]), st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_singular_truncation_stabilizes(K, b):
    L = LinearForm(K, b % K)
    assert analytic.singular_product_truncated(L, 60) == analytic.singular_product(L)
