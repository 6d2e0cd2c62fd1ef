import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from xy1bench import envelope as ev
from xy1bench.arith import InvalidArgument


@pytest.fixture(scope="module")
def model():
    return ev.build_envelope(4320, 11, 5, 30, 2000)


def test_local_densities(model):
    assert model.primes == (7, 11, 13, 17, 19, 23, 29)
    assert model.h[7] == Fraction(2, 5) and model.h[13] == Fraction(1, 12)
    assert model.h[29] == Fraction(1, 28)
    assert 7 * 13 not in model.h
    assert all(d <= 30 for d in model.h)
    assert model.G1 == Fraction(172787, 85680)
    for p in model.primes:
        assert len(model.sifted[p]) == ev.omega(p, 5)


def test_G1_two_routes(model):
    assert ev.G1_crosscheck(model) == model.G1


def test_empty_sieve():
    m = ev.build_envelope(4320, 11, 5, 6, 100)
    assert m.primes == () and m.G1 == 1 and m.rho == {1: Fraction(1)}
    assert all(ev.beta_at(m, n) == 1 for n in range(100, 110))


def test_rho_bounds(model):
    assert model.rho[1] == 1
    assert all(abs(r) <= 1 for r in model.rho.values())
    assert all(d <= model.z for d in model.rho)


def test_rho_star(model):
    # Moebius inversion recovers rho from rho*
    for d, r in model.rho.items():
        mu_d = (-1) ** len(ev._prime_list(d))
        back = sum((ev.rho_star(model, ell) for ell in model.rho_star if ell % d == 0), Fraction(0))
        assert back * mu_d == r
    with pytest.raises(InvalidArgument):
        ev.rho_star(model, 31)


@given(st.integers(2000, 3999))
@settings(max_examples=80, deadline=None)
def test_beta_two_routes(n):
    m = ev.build_envelope(4320, 11, 5, 30, 2000)
    b = ev.beta_at(m, n)
    assert b == ev.beta_dual(m, n) and b >= 0


@given(st.integers(1, 10**6), st.sampled_from([7, 11, 7 * 13, 11 * 17, 7 * 19 * 23, 13 * 29]))
@settings(max_examples=80, deadline=None)
def test_charsum_against_enumeration(a, q):
    m = ev.build_envelope(4320, 11, 5, 30, 2000)
    assert abs(ev.charsum(m, a, q) - ev.charsum_direct(m, a, q)) < 1e-9


def test_fourier_vanishing(model):
    assert ev.fourier_v(model, 1, 1) == 1 and isinstance(ev.fourier_v(model, 1, 1), Fraction)
    for q in (2, 3, 5, 4, 9, 49, 7 * 7 * 2, 31):
        for a in (1, q - 1):
            if math.gcd(a, q) == 1:
                assert ev.fourier_v(model, a, q) == 0
    assert abs(ev.fourier_v(model, 1, 7)) > 0
    with pytest.raises(InvalidArgument):
        ev.fourier_v(model, 7, 7)
    with pytest.raises(InvalidArgument):
        ev.fourier_v(model, 1, 901)


def test_non_amenable_rejected():
    with pytest.raises(InvalidArgument):
        ev.build_envelope(4320, 0, 5, 30, 100)


def test_expansion(model):
    values = ev.compute_values(model)
    sample = random.Random(3).sample(range(model.N, 2 * model.N), 40)
    assert ev.verify_expansion(model, values, sample) <= 1e-9
    assert abs(ev.window_mean(values) - 1) < 0.05
    assert all(d <= model.z**2 for d in ev.support_moduli(model))


def test_dump_restore(model):
    text = ev.dump_model(model)
    back = ev.restore_model(text)
    assert back.rho == model.rho and back.rho_star == model.rho_star and back.G1 == model.G1
    assert back.sifted == model.sifted and back.h == model.h
    with pytest.raises(ValueError):
        ev.restore_model('{"format": "other"}')
