"""The enveloping sieve beta(n): Selberg coefficients, dual coefficients and
the Fourier coefficients v(a/q) of its expansion in e(-a n / q).

Residue sets are kept on the n side: A'_p = {n mod p : W n + B in A_p}.  Since
gcd(W, p) = 1 for every sifting prime, n -> W n + B permutes Z_p, so the sizes
|A_d|, |K_d| are unchanged and the expansion in e(-a n / q) is direct.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import InvalidArgument, factorize, _small_sieve
from .forms import LinearForm, is_amenable

FORMAT_VERSION = 1
MAX_DIVISORS = 10**6


class ResourceError(RuntimeError):
    pass


def omega(p: int, w: int) -> int:
    if p <= w:
        return 0
    return 1 if p % 4 == 1 else 2


def _squarefree_products(primes: list[int], bound: float) -> list[int]:
    """All squarefree products of the given primes that are <= bound, ascending."""
    out = [1]
    ps = sorted(primes)

    def extend(prod: int, start: int):
        for i in range(start, len(ps)):
            nxt = prod * ps[i]
            if nxt > bound:
                break
            out.append(nxt)
            if len(out) > MAX_DIVISORS:
                raise ResourceError(f"more than {MAX_DIVISORS} divisors below {bound}")
            extend(nxt, i + 1)

    extend(1, 0)
    out.sort()
    return out


def _prime_list(d: int) -> list[int]:
    return [] if d == 1 else factorize(d).primes()


@dataclass
class EnvelopeModel:
    W: int
    B: int
    w: int
    z: float
    N: int
    primes: tuple[int, ...]                    # sifting primes w < p < z
    h: dict[int, Fraction]                     # squarefree delta | P(z), delta <= z
    G1: Fraction
    rho: dict[int, Fraction]                   # d | P(z) with rho_d != 0 (all have d <= z)
    rho_star: dict[int, Fraction]              # l | P(z) with rho*_l != 0
    sifted: dict[int, tuple[int, ...]] = field(repr=False, default_factory=dict)  # p -> A'_p

    @property
    def P(self) -> int:
        return math.prod(self.primes)

    def k_size(self, d: int) -> int:
        """|K_d| for squarefree d | P(z)."""
        return math.prod(p - len(self.sifted[p]) for p in _prime_list(d))

    def rho_of(self, d: int) -> Fraction:
        return self.rho.get(d, Fraction(0))


def build_envelope(W: int, B: int, w: int, z: float, N: int) -> EnvelopeModel:
    ev = is_amenable(LinearForm(W, B))
    if not ev:
        raise InvalidArgument(f"W n + B is not amenable: {ev.clause}")
    primes = [int(p) for p in _small_sieve(max(2, math.ceil(z))) if w < p < z]
    if any(W % p == 0 for p in primes):
        raise InvalidArgument("W shares a prime with the sifting range")
    winv = {p: pow(W, -1, p) for p in primes}
    sifted = {}
    for p in primes:
        cls = {(-B * winv[p]) % p}
        if p % 4 == 3:
            cls.add(((1 - B) * winv[p]) % p)
        sifted[p] = tuple(sorted(cls))

    hp = {p: Fraction(omega(p, w), p - omega(p, w)) for p in primes}
    deltas = _squarefree_products(primes, z)
    h = {d: math.prod((hp[p] for p in _prime_list(d)), start=Fraction(1)) for d in deltas}

    def G(d: int) -> Fraction:
        return sum((h[e] for e in deltas if d * e // math.gcd(d, e) <= z), Fraction(0))

    G1 = G(1)
    # G_d vanishes once d > z, so only d <= z carry a coefficient.
    rho = {}
    for d in deltas:
        g = G(d)
        if g:
            rho[d] = (-1) ** len(_prime_list(d)) * g / G1
    rho_star = {}
    for ell in deltas:
        r = _rho_star_from(rho, ell)
        if r:
            rho_star[ell] = r
    return EnvelopeModel(W, B, w, z, N, tuple(primes), h, G1, rho, rho_star, sifted)


def _rho_star_from(rho: dict[int, Fraction], ell: int) -> Fraction:
    # mu(d / l) mu(d) = mu(l) for squarefree d divisible by l
    mu_l = (-1) ** len(_prime_list(ell))
    return mu_l * sum((r for d, r in rho.items() if d % ell == 0), Fraction(0))


def rho_star(model: EnvelopeModel, ell: int) -> Fraction:
    """rho*_l = sum over d = 0 mod l of mu(d / l) mu(d) rho_d, for l | P(z)."""
    if ell < 1 or model.P % ell:
        raise InvalidArgument(f"{ell} does not divide P(z)")
    total = Fraction(0)
    for d, r in model.rho.items():
        if d % ell == 0:
            mu_dl = (-1) ** len(_prime_list(d // ell))
            mu_d = (-1) ** len(_prime_list(d))
            total += mu_dl * mu_d * r
    return total


def G1_crosscheck(model: EnvelopeModel) -> Fraction:
    """G_1(z) summed a second way: depth-first over primes in decreasing order."""
    ps = sorted(model.primes, reverse=True)
    w = model.w
    total = Fraction(0)

    def walk(prod: int, hval: Fraction, start: int):
        nonlocal total
        total += hval
        for i in range(start, len(ps)):
            p = ps[i]
            if prod * p <= model.z:
                walk(prod * p, hval * Fraction(omega(p, w), p - omega(p, w)), i + 1)

    walk(1, Fraction(1), 0)
    return total


def in_A(model: EnvelopeModel, n: int, d: int) -> bool:
    """W n + B in A_d, by direct modular evaluation."""
    m = model.W * n + model.B
    for p in _prime_list(d):
        r = m % p
        if not (r == 0 or (p % 4 == 3 and r == 1)):
            return False
    return True


def beta_at(model: EnvelopeModel, n: int) -> Fraction:
    s = sum((r for d, r in model.rho.items() if in_A(model, n, d)), Fraction(0))
    return model.G1 * s * s


def beta_dual(model: EnvelopeModel, n: int) -> Fraction:
    """beta(n) = G_1 (sum_l rho*_l 1_{K_l}(n))^2; second route to beta_at."""
    s = Fraction(0)
    for ell, r in model.rho_star.items():
        if all((n % p) not in model.sifted[p] for p in _prime_list(ell)):
            s += r
    return model.G1 * s * s


# -- Fourier coefficients -----------------------------------------------------

def _charsum_prime(model: EnvelopeModel, p: int, c: int) -> complex:
    """sum over b in K_p of e(c b / p) via the complement: -sum over A'_p when c != 0 mod p."""
    c %= p
    if c == 0:
        return complex(p - len(model.sifted[p]))
    re = [-math.cos(2 * math.pi * ((c * b) % p) / p) for b in model.sifted[p]]
    im = [-math.sin(2 * math.pi * ((c * b) % p) / p) for b in model.sifted[p]]
    return complex(math.fsum(re), math.fsum(im))


def charsum(model: EnvelopeModel, a: int, q: int) -> complex:
    """sum over b in K_q of e(a b / q), q squarefree with sifting primes only (CRT factorization)."""
    out = complex(1.0)
    for p in _prime_list(q):
        out *= _charsum_prime(model, p, a * pow(q // p, -1, p))
    return out


def charsum_direct(model: EnvelopeModel, a: int, q: int) -> complex:
    """Enumerates K_q; oracle for charsum."""
    ps = _prime_list(q)
    re, im = [], []
    for b in range(q):
        if all((b % p) not in model.sifted[p] for p in ps):
            t = 2 * math.pi * ((a * b) % q) / q
            re.append(math.cos(t))
            im.append(math.sin(t))
    return complex(math.fsum(re), math.fsum(im))


def _is_squarefree(q: int) -> bool:
    return q == 1 or all(e == 1 for _, e in factorize(q).factors)


def v_weight(model: EnvelopeModel, q: int) -> Fraction:
    """Exact rational prefactor R_q with v(a/q) = R_q * charsum(a, q)."""
    if not _is_squarefree(q) or (q != 1 and math.gcd(q, model.W) != 1) or model.P % q:
        return Fraction(0)
    total = Fraction(0)
    items = list(model.rho_star.items())
    for l1, r1 in items:
        for l2, r2 in items:
            D = l1 * l2 // math.gcd(l1, l2)
            if D % q == 0:
                total += r1 * r2 * model.k_size(D) / D
    return model.G1 * total / model.k_size(q)


def fourier_v(model: EnvelopeModel, a: int, q: int):
    """v(a/q).  Exact Fraction for q = 1 and on every vanishing case, complex otherwise."""
    if q < 1:
        raise InvalidArgument("q must be positive")
    if math.gcd(a, q) != 1:
        raise InvalidArgument(f"gcd({a}, {q}) != 1")
    if q > model.z**2:
        raise InvalidArgument("q beyond z^2")
    R = v_weight(model, q)
    if R == 0 or q == 1:
        return R
    return float(R) * charsum(model, a, q)


@dataclass
class EnvelopeValues:
    beta: dict[int, Fraction]
    weights: dict[int, Fraction]                     # q -> R_q, nonzero only
    fourier: dict[tuple[int, int], complex]          # (a, q) -> v(a/q)


def support_moduli(model: EnvelopeModel) -> list[int]:
    """Squarefree q | P(z), q <= z^2: every q that can carry a nonzero coefficient."""
    return _squarefree_products(list(model.primes), model.z**2)


def compute_values(model: EnvelopeModel, window: range | None = None) -> EnvelopeValues:
    window = range(model.N, 2 * model.N) if window is None else window
    beta = {n: beta_at(model, n) for n in window}
    weights, fourier = {}, {}
    for q in support_moduli(model):
        R = v_weight(model, q)
        if R == 0:
            continue
        weights[q] = R
        for a in range(1, q + 1):
            if math.gcd(a, q) == 1:
                fourier[(a % q, q)] = complex(R) if q == 1 else float(R) * charsum(model, a, q)
    return EnvelopeValues(beta, weights, fourier)


def expansion_at(values: EnvelopeValues, n: int) -> float:
    """sum over (a, q) of v(a/q) e(-a n / q); real part, compensated summation per modulus."""
    parts = []
    by_q: dict[int, list[tuple[int, complex]]] = {}
    for (a, q), v in values.fourier.items():
        by_q.setdefault(q, []).append((a, v))
    for q in sorted(by_q):
        a = np.array([x for x, _ in by_q[q]], dtype=np.int64)
        v = np.array([y for _, y in by_q[q]])
        ph = np.exp(-2j * np.pi * ((a * n) % q) / q)
        parts.extend((v * ph).real.tolist())
    return math.fsum(parts)


def verify_expansion(model: EnvelopeModel, values: EnvelopeValues, sample) -> float:
    """max |beta(n) - expansion(n)| over the sample."""
    worst = 0.0
    for n in sample:
        exact = values.beta[n] if n in values.beta else beta_at(model, n)
        worst = max(worst, abs(float(exact) - expansion_at(values, n)))
    return worst


def decay_table(values: EnvelopeValues) -> list[tuple[int, float]]:
    """(q, max over a of |v(a/q)| * q) for each modulus with a nonzero coefficient."""
    best: dict[int, float] = {}
    for (a, q), v in values.fourier.items():
        best[q] = max(best.get(q, 0.0), abs(v) * q)
    return sorted(best.items())


def window_mean(values: EnvelopeValues) -> float:
    """(1/N) sum of beta over the window; the measured kappa_2 proxy."""
    b = list(values.beta.values())
    return float(sum(b, Fraction(0)) / len(b)) if b else 0.0


# -- text format ----------------------------------------------------------------

def _fr(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


def dump_model(model: EnvelopeModel) -> str:
    doc = {
        "format": "xy1bench-envelope",
        "version": FORMAT_VERSION,
        "W": model.W, "B": model.B, "w": model.w, "z": model.z, "N": model.N,
        "primes": list(model.primes),
        "sifted": {str(p): list(v) for p, v in model.sifted.items()},
        "h": {str(d): _fr(v) for d, v in model.h.items()},
        "G1": _fr(model.G1),
        "rho": {str(d): _fr(v) for d, v in model.rho.items()},
        "rho_star": {str(d): _fr(v) for d, v in model.rho_star.items()},
    }
    return json.dumps(doc, indent=1, sort_keys=True)


def restore_model(text: str) -> EnvelopeModel:
    doc = json.loads(text)
    if doc.get("format") != "xy1bench-envelope" or doc.get("version") != FORMAT_VERSION:
        raise ValueError("unrecognized envelope dump")

    def tab(key):
        return {int(k): Fraction(*v) for k, v in doc[key].items()}

    return EnvelopeModel(
        doc["W"], doc["B"], doc["w"], doc["z"], doc["N"], tuple(doc["primes"]),
        tab("h"), Fraction(*doc["G1"]), tab("rho"), tab("rho_star"),
        {int(p): tuple(v) for p, v in doc["sifted"].items()},
    )
