"""The fourteen acceptance checks.  Each returns a CheckResult; `run_all`
drives them for both the test suite and the `verify-all` subcommand."""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import analytic, arith, envelope, experiments, forms, weights, zfourier
from .weights import Kind, SieveSupport


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    limit: float | None = None

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _timed(number: int, name: str, limit: float | None):
    def deco(fn):
        def run() -> CheckResult:
            t = time.perf_counter()
            ok, detail = fn()
            dt = time.perf_counter() - t
            if limit is not None and dt >= limit:
                ok = False
                detail += f"; over the {limit:g}s budget"
            return CheckResult(number, name, bool(ok), detail, dt, limit)
        run.number = number
        run.__name__ = fn.__name__
        return run
    return deco


@_timed(1, "H margin at (1/2, 3/7, 3)", 1.0)
def check_h_main():
    r = analytic.check_H(analytic.HParams(0.5, 3 / 7, 3.0), tol=1e-6)
    return r.holds and r.margin > 1e-3, f"margin {r.margin:.6f}, error {r.error:.1e}"


@_timed(2, "H margin at theta = 1/80", None)
def check_h_theta():
    r = analytic.check_H(analytic.HParams(0.475, 0.95 * 3 / 7, 120 / 37), tol=1e-6)
    return r.holds and r.margin > 1e-3, f"margin {r.margin:.6f}, error {r.error:.1e}"


@_timed(3, "I1 quadrature against closed form", 5.0)
def check_i1():
    rng = random.Random(20240501)
    worst = 0.0
    for _ in range(100):
        rho2 = rng.uniform(1 / 3, 1 / 2)
        sigma = rng.uniform(3.0, 4.0)
        q = analytic.I1(rho2, sigma, tol=1e-12).value
        worst = max(worst, abs(q - analytic.I1_closed(rho2, sigma)))
    return worst <= 1e-8, f"max |diff| {worst:.2e} over 100 pairs"


def s_bruteforce(limit: int) -> np.ndarray:
    """Mask over [0, limit]: n = a^2 + b^2 with gcd(a, b) having no prime factor beyond 3."""
    r = math.isqrt(limit)
    a, b = np.meshgrid(np.arange(r + 1), np.arange(r + 1), indexing="ij")
    a, b = a.ravel(), b.ravel()
    keep = (a <= b) & (a * a + b * b <= limit) & (b > 0)
    a, b = a[keep], b[keep]
    g = np.gcd(a, b)
    for p in (2, 3):
        while True:
            m = g % p == 0
            if not m.any():
                break
            g = np.where(m, g // p, g)
    mask = np.zeros(limit + 1, dtype=bool)
    mask[(a * a + b * b)[g == 1]] = True
    return mask


@_timed(4, "S criterion against (a, b) search", 60.0)
def check_s_oracle():
    limit = 10**5
    brute = s_bruteforce(limit)
    bad = [n for n in range(1, limit + 1) if arith.in_S(n) != brute[n]]
    return not bad, f"{len(bad)} mismatches on [1, {limit}]"


def two_square_enumeration(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """Masks over [0, limit]: any x^2 + y^2, and x^2 + y^2 with gcd(x, y) = 1."""
    r = math.isqrt(limit)
    x, y = np.meshgrid(np.arange(r + 1), np.arange(r + 1), indexing="ij")
    x, y = x.ravel(), y.ravel()
    v = x * x + y * y
    keep = v <= limit
    anyrep = np.zeros(limit + 1, dtype=bool)
    anyrep[v[keep]] = True
    cop = np.zeros(limit + 1, dtype=bool)
    cop[v[keep & (np.gcd(x, y) == 1)]] = True
    return anyrep, cop


@_timed(5, "P and P* criterion against (x, y) enumeration", None)
def check_p_sets():
    limit = 10**5
    T = arith.sieve_primes(limit)
    ps = T.primes()
    anyrep, cop = two_square_enumeration(limit)
    enum_P = anyrep[ps - 1]
    enum_Ps = cop[ps - 1]
    mis = int(np.sum(enum_P != T.in_P_mask()) + np.sum(enum_Ps != T.in_Pstar_mask()))
    small = ps <= 100
    counts = (int(T.in_P_mask()[small].sum()), int(enum_P[small].sum()),
              int(T.in_Pstar_mask()[small].sum()), int(enum_Ps[small].sum()))
    ok = mis == 0 and counts == (12, 12, 5, 5)
    return ok, f"{mis} mismatches over {ps.size} primes; counts on [1,100] P {counts[0]}/{counts[1]}, P* {counts[2]}/{counts[3]}"


@_timed(6, "local lemmas mod 2^J and mod 27", 10.0)
def check_local_lemmas():
    bad_j = [J for J in range(5, 13) if not forms.check_lemma_2adic(J).ok]
    adm = [m for m in range(27) if m % 9 not in (3, 6)]
    reps = {(x * x + y * y) % 27 for x in range(27) for y in range(27)}
    done = 0
    for m in adm:
        dec = forms.check_lemma_27(m)
        if dec is None:
            continue
        x1, y1 = dec.witness1
        x2, y2 = dec.witness2
        if ((dec.a1 + dec.a2) % 27 == m and dec.a1 in reps and dec.a2 in reps
                and (x1 * x1 + y1 * y1) % 27 == dec.a1 and (x2 * x2 + y2 * y2) % 27 == dec.a2
                and dec.a1 % 9 in (0, 2, 5, 8) and dec.a2 % 9 in (0, 2, 5, 8)):
            done += 1
    obstruction = forms.mod27_obstruction()
    ok = not bad_j and done == len(adm) == 21 and not any(obstruction.values())
    return ok, (f"2-adic fails for J in {bad_j or 'none'}; {done}/{len(adm)} residues decomposed; "
                f"obstruction holds for {sum(not v for v in obstruction.values())}/{len(obstruction)} classes")


def optimality_scale(kind: Kind) -> float:
    """Smallest power of 1000 at which the remark's prime window holds enough primes."""
    return 1e12 if kind is Kind.SEM_MINUS else 1e9


@_timed(7, "sieve-weight splits and optimality", 300.0)
def check_splits():
    x, eps = 1e6, 0.01
    notes, ok = [], True
    for kind in Kind:
        for theta in (0.0, 1 / 80):
            S = SieveSupport.standard(kind, x, theta, eps)
            lo, hi = weights.split_range(S)
            D = math.sqrt(lo * hi)
            members = weights.enumerate_support(S)
            fallbacks = bad = 0
            for d in members:
                try:
                    r = weights.split(S, d, D)
                except weights.LemmaViolation:
                    bad += 1
                    continue
                fallbacks += r.fallback
                if r.d1 * r.d2 != d or not weights.split_valid(S, r.d1, r.d2, D):
                    bad += 1
            ok &= fallbacks == 0 and bad == 0
            notes.append(f"{kind.value}/{theta:g}: {len(members)} members, {fallbacks} fallbacks, {bad} bad")
    for kind in (Kind.SEM_MINUS, Kind.SEM_PLUS):
        for theta in (0.0, 1 / 80):
            xc = optimality_scale(kind)
            ce = weights.optimality_counterexample(kind, xc, theta, eps)
            ok &= ce is not None
            notes.append(f"counterexample {kind.value}/{theta:g} at x={xc:.0e}: "
                         + ("none" if ce is None else "*".join(map(str, ce.primes))))
    return ok, "; ".join(notes)


def qualifying(model: envelope.EnvelopeModel, n: int) -> bool:
    """W n + B prime, W n + B - 1 in S, and no prime in (w, z) divides (W n + B)(W n + B - 1)."""
    m = model.W * n + model.B
    if any(m % p == 0 or (m - 1) % p == 0 for p in model.primes):
        return False
    f = arith.factorize(m).factors
    return len(f) == 1 and f[0][1] == 1 and arith.in_S(m - 1)


@_timed(8, "enveloping sieve identities", 120.0)
def check_envelope():
    W = forms.build_W(5, 5).W
    B = next(b for b in range(W) if forms.is_amenable(forms.LinearForm(W, b)))
    model = envelope.build_envelope(W, B, 5, 30, 10**4)
    v1 = envelope.fourier_v(model, 1, 1)
    zmax = int(model.z**2)
    zero_W = all(envelope.fourier_v(model, a, q) == 0
                 for q in range(2, zmax + 1) if W % q == 0
                 for a in range(1, q) if math.gcd(a, q) == 1)
    nonsq = [q for q in range(4, zmax + 1) if any(q % (p * p) == 0 for p in range(2, math.isqrt(q) + 1))]
    zero_sq = all(envelope.fourier_v(model, a, q) == 0
                  for q in nonsq for a in (1, q - 1))
    values = envelope.compute_values(model)
    sample = random.Random(11).sample(range(model.N, 2 * model.N), 100)
    disc = envelope.verify_expansion(model, values, sample)
    qual = [n for n in range(model.N, 2 * model.N) if qualifying(model, n)]
    eq_g1 = all(values.beta[n] == model.G1 for n in qual)
    ok = v1 == Fraction(1) and isinstance(v1, Fraction) and zero_W and zero_sq and disc <= 1e-6 and eq_g1 and qual
    return ok, (f"v(1) = {v1}; zero for q | W: {zero_W}; zero for non-squarefree q: {zero_sq}; "
                f"expansion error {disc:.1e}; beta = G1 on {len(qual)} qualifying n: {eq_g1}")


@_timed(9, "Fourier identities and the smoothed indicator", 30.0)
def check_fourier():
    rng = np.random.default_rng(9)
    worst = 0.0
    for N in (64, 512, 4096):
        for _ in range(3):
            f = zfourier.Signal.of(rng.normal(size=N) + 1j * rng.normal(size=N))
            g = zfourier.Signal.of(rng.normal(size=N))
            F, G = zfourier.dft(f), zfourier.dft(g)
            lhs = float(np.sum(np.abs(f.values) ** 2))
            worst = max(worst, abs(lhs - N * float(np.sum(np.abs(F) ** 2))) / lhs)
            conv = zfourier.dft(zfourier.convolve(f, g))
            worst = max(worst, float(np.max(np.abs(conv - F * G)) / np.max(np.abs(F * G))))
    built = 0
    for _ in range(20):
        N = int(rng.choice([128, 256, 512, 1024]))
        k = int(rng.integers(1, 4))
        eta = float(rng.uniform(1 / 32, 1 / 8))
        spec = zfourier.BohrSpec(N, tuple(int(x) for x in rng.integers(1, N, k)), eta)
        try:
            chi = zfourier.build_chi(spec)
        except zfourier.ConstructionError:
            continue
        rep = zfourier._property_report(spec, chi.values)
        if all(rep[c] for c in zfourier._CLAUSES) and math.isfinite(rep["finite_max"]):
            built += 1
    return worst <= 1e-9 and built == 20, f"max relative error {worst:.1e}; {built}/20 indicators pass every clause"


@_timed(10, "transference pipeline", 120.0)
def check_transference():
    N, delta, eps = 4096, 0.2, 0.05
    const = zfourier.Signal.of(np.full(N, 2 * delta))
    r0 = zfourier.transference_demo(const, const, delta, eps, 10.0)
    rng = np.random.default_rng(10)
    held = viol = tries = 0
    while held < 50 and tries < 200:
        tries += 1
        f1 = zfourier.Signal.of(6 * delta + rng.uniform(0, 2, N))
        f2 = zfourier.Signal.of(6 * delta + rng.uniform(0, 2, N))
        try:
            r = zfourier.transference_demo(f1, f2, delta, eps, 50.0)
        except zfourier.TransferenceViolation:
            held += 1
            viol += 1
            continue
        if r.conditions_hold:
            held += 1
    alpha = (math.sqrt(5) - 1) / 2
    t = (alpha * np.arange(N)) % 1.0
    avoid = zfourier.Signal.of(np.where(np.minimum(t, 1 - t) < 0.01, 100.0, 0.0))
    rb = zfourier.transference_demo(avoid, avoid, delta, eps, 1e6)
    ok = r0.T_size == 0 and held == 50 and viol == 0 and rb.T_size > eps * N and rb.cond_i is False
    return ok, (f"constant |T| = {r0.T_size}; {held} pairs with conditions met, {viol} with |T| > eps N; "
                f"Bohr-avoiding |T| = {rb.T_size} vs eps N = {eps * N:g}, condition (i) {rb.cond_i}")


@_timed(11, "residue set Q", 30.0)
def check_qset():
    Wm = forms.build_W(5, 13).W
    b = next(c for c in range(1, Wm) if forms.is_amenable(forms.LinearForm(Wm, c)))
    rng = random.Random(2024)
    mism = 0
    for _ in range(100):
        Q = rng.randint(1, 3000)
        bb = rng.randrange(Wm)
        while not forms.is_amenable(forms.LinearForm(Wm, bb)):
            bb = rng.randrange(Wm)
        if len(forms.residue_set_Q(Q, Wm, bb)) != forms.q_cardinality_formula(Q, Wm):
            mism += 1
    worst = 0.0
    for Q in (17, 17 * 29, 17 * 19 * 23, 37 * 41, 29 * 31, 43 * 47 * 53):
        rep = forms.check_expsum_bound(forms.residue_set_Q(Q, Wm, b), 13)
        worst = max(worst, rep.max_ratio)
    return mism == 0 and worst <= 13**-0.5, f"{mism} cardinality mismatches; max ratio {worst:.4f} vs {13**-0.5:.4f}"


@_timed(12, "Goldbach desk scale", 600.0)
def check_goldbach():
    rep = experiments.goldbach_scan(10**6)
    dens = [d for _, d in rep.density_by_decade]
    decreasing = len(dens) == 4 and all(a > b for a, b in zip(dens, dens[1:]))
    blocks = experiments.normalized_rep_statistic(rep, 10**5, 10**6 + 1)
    med = [b.median for b in blocks]
    stable = bool(med) and max(med) <= 2 * min(med)
    verified = experiments.verify_exceptions(rep)
    ok = decreasing and 12 in rep.exceptions and rep.obstructed_ok and rep.obstructed_checked_to >= 10**5 and stable and verified
    return ok, (f"densities {', '.join(f'{d:.4f}' for d in dens)}; 12 exceptional: {12 in rep.exceptions}; "
                f"5,8 mod 9 use 3 up to {rep.obstructed_checked_to}: {rep.obstructed_ok}; "
                f"block medians {', '.join(f'{m:.3f}' for m in med)}; exceptions re-verified: {verified}")


@_timed(13, "3-APs in P* and fractional parts", 120.0)
def check_ap3_alphap():
    a, b = experiments.ap3_count(10**3), experiments.ap3_bruteforce(10**3)
    scan = experiments.alphap_scan(math.sqrt(2), 0.0, 1 / 80, [10**4, 10**5, 10**6])
    inc = all(x < y for x, y in zip(scan.counts, scan.counts[1:]))
    return a == b and inc, f"ap3(1000) = {a}, brute force {b}; counts {scan.counts}"


@_timed(14, "Lambda e(alpha n) harness against brute force", None)
def check_bv():
    alpha = math.sqrt(2)
    same = []
    for kind in Kind:
        S = SieveSupport.standard(kind, 1000)
        same.append(experiments.bv_harness(S, alpha, 1, 1000).total == experiments.bv_bruteforce(S, alpha, 1, 1000))
    t = time.perf_counter()
    S = SieveSupport.standard(Kind.SEM_MINUS, 10**5)
    big = experiments.bv_harness(S, alpha, 1, 10**5)
    dt = time.perf_counter() - t
    ok = all(same) and dt < 60
    return ok, f"bit-exact for {sum(same)}/3 supports at N=1000; N=1e5 total {big.total:.3f} in {dt:.2f}s"


CHECKS = [
    check_h_main, check_h_theta, check_i1, check_s_oracle, check_p_sets, check_local_lemmas,
    check_splits, check_envelope, check_fourier, check_transference, check_qset, check_goldbach,
    check_ap3_alphap, check_bv,
]


def run_all(only: list[int] | None = None, echo=None) -> list[CheckResult]:
    out = []
    for chk in CHECKS:
        if only and chk.number not in only:
            continue
        try:
            r = chk()
        except Exception as exc:  # a crash is a failed criterion, not a crashed suite
            r = CheckResult(chk.number, chk.__name__, False, f"raised {type(exc).__name__}: {exc}", 0.0)
        if echo:
            echo(r.line())
        out.append(r)
    return out
