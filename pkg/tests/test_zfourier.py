import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from xy1bench import zfourier as zf
from xy1bench.zfourier import BohrSpec, Signal


def test_trivial_transforms():
    N = 16
    delta = Signal.of(np.eye(N)[0])
    assert np.allclose(zf.dft(delta), np.full(N, 1 / N))
    const = Signal.of(np.ones(N))
    F = zf.dft(const)
    assert F[0] == pytest.approx(1) and np.allclose(F[1:], 0)
    assert np.allclose(zf.idft(F), const.values)


@given(st.integers(1, 300), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_fft_against_direct(N, seed):
    rng = np.random.default_rng(seed)
    f = Signal.of(rng.normal(size=N) + 1j * rng.normal(size=N))
    F = zf.dft(f)
    assert np.allclose(F, zf.dft_direct(f), atol=1e-12)
    # Parseval with this normalisation: E|f|^2 = sum |f^|^2
    assert np.mean(np.abs(f.values) ** 2) == pytest.approx(np.sum(np.abs(F) ** 2), rel=1e-10)


@given(st.integers(1, 120), st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_convolution(N, seed):
    rng = np.random.default_rng(seed)
    f, g = Signal.of(rng.normal(size=N)), Signal.of(rng.normal(size=N))
    c = zf.convolve(f, g)
    assert np.allclose(c.values, zf.convolve_direct(f, g).values, atol=1e-12)
    assert np.allclose(zf.dft(c), zf.dft(f) * zf.dft(g), atol=1e-12)


def test_size_limits():
    with pytest.raises(ValueError):
        Signal(4, np.zeros(3))
    with pytest.raises(ValueError):
        zf.convolve(Signal.of(np.zeros(4)), Signal.of(np.zeros(5)))


def test_lr_norm():
    N = 64
    assert zf.lr_norm(Signal.of(np.ones(N)), 3) == pytest.approx(1.0)
    assert zf.lr_norm(Signal.of(np.eye(N)[0]), 4) == pytest.approx(N * N**-4)


def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    for vals in (rng.normal(size=33), rng.normal(size=7) + 1j * rng.normal(size=7)):
        p = tmp_path / "s.csv"
        zf.write_signal_csv(p, Signal.of(vals))
        assert np.array_equal(zf.read_signal_csv(p).values, vals)


def test_bohr_examples():
    N = 100
    assert np.flatnonzero(zf.bohr_set(BohrSpec(N, (1,), 0.05))).tolist() == [0, 1, 2, 3, 4, 5, 95, 96, 97, 98, 99]
    # xi = 50 only sees parity
    assert zf.bohr_set(BohrSpec(N, (50,), 0.1)).sum() == 50
    with pytest.raises(ValueError):
        BohrSpec(N, (1,), 0.5)


@given(st.sampled_from([97, 128, 210, 500]), st.lists(st.integers(1, 10**4), min_size=1, max_size=3),
       st.floats(0.01, 0.4))
@settings(max_examples=60, deadline=None)
def test_bohr_size_lower_bound(N, Om, eta):
    spec = BohrSpec(N, tuple(Om), eta)
    assert zf.bohr_set(spec).sum() >= eta ** len(spec.Omega) * N


@pytest.mark.parametrize("N,Om,eta", [(256, (1,), 1 / 16), (512, (3, 17), 1 / 10), (1024, (5, 100, 333), 1 / 8),
                                      (128, (1, 2, 3, 4), 1 / 20)])
def test_chi_properties(N, Om, eta):
    spec = BohrSpec(N, Om, eta)
    chi = zf.build_chi(spec)
    rep = zf._property_report(spec, chi.values)
    assert all(rep[c] for c in zf._CLAUSES)
    assert chi.mode == "fejer-step" and chi.report["coefficient_residual"] < 1e-9
    # coefficient of the product at a single frequency agrees with the transform
    F = zf.dft(Signal(N, chi.values))
    if len(spec.Omega) == 1:
        for ell in range(-3, 4):
            assert chi.coefficient((ell,)) == pytest.approx(F[(ell * spec.Omega[0]) % N].real, abs=1e-9)


def test_chi_subgroup_regime():
    spec = BohrSpec(1000, (10,), 1e-5)
    chi = zf.build_chi(spec)
    assert chi.mode == "subgroup" and chi.values.sum() == 10


def test_chi_rejects_large_omega():
    with pytest.raises(ValueError):
        zf.build_chi(BohrSpec(512, tuple(range(1, 10)), 0.1))


def test_transference_constant():
    N = 1024
    c = Signal.of(np.full(N, 0.4))
    r = zf.transference_demo(c, c, 0.2, 0.05, 10.0)
    # a constant 0.4 puts only about 0.067 N of mass in (N/3, N/2), short of delta N
    assert not r.cond_ii and r.cond_i and r.cond_iii
    assert r.T_size == 0 and r.chi_mode == "subgroup"


def test_transference_random_pairs():
    rng = np.random.default_rng(1)
    N = 1024
    for _ in range(5):
        f1 = Signal.of(1.2 + rng.uniform(0, 2, N))
        f2 = Signal.of(1.2 + rng.uniform(0, 2, N))
        r = zf.transference_demo(f1, f2, 0.2, 0.05, 50.0)
        assert r.conditions_hold and r.conclusion_holds


def test_transference_bohr_avoiding():
    N = 2048
    a = (math.sqrt(5) - 1) / 2
    t = (a * np.arange(N)) % 1.0
    f = Signal.of(np.where(np.minimum(t, 1 - t) < 0.01, 100.0, 0.0))
    r = zf.transference_demo(f, f, 0.2, 0.05, 1e6)
    assert r.T_size > 0.05 * N and r.cond_i is False and not r.conditions_hold


def test_transference_rejects_negative():
    with pytest.raises(ValueError):
        zf.transference_demo(Signal.of(-np.ones(8)), Signal.of(np.ones(8)), 0.2, 0.05, 10.0)
