"""Analytic quantities: the integrals I1, I2 and the H predicate, the sieve
functions f and F, truncated Euler products and the singular product."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import factorize, sieve_primes, _small_sieve
from .forms import LinearForm

# Euler-Mascheroni constant, 30 digits (OEIS A001620).
EULER_GAMMA = 0.577215664901532860606512090082

H_GAP = 1e-10

# Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK qk15 tables).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate((-_XGK[:-1], _XGK[::-1]))          # 15 nodes, ascending
_WK15 = np.concatenate((_WGK[:-1], _WGK[::-1]))
_WG7 = np.zeros(15)
_WG7[1:7:2] = _WG[:3]           # Gauss nodes are the odd-indexed Kronrod nodes
_WG7[7] = _WG[3]
_WG7[9:15:2] = _WG[2::-1]


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int
    converged: bool = True


def gk15(f, a: float, b: float) -> tuple[float, float]:
    """One Gauss-Kronrod 7/15 panel: (Kronrod value, |Kronrod - Gauss|)."""
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    y = f(c + h * _NODES)
    k = h * float(np.dot(_WK15, y))
    g = h * float(np.dot(_WG7, y))
    return k, abs(k - g)


def integrate(f, a: float, b: float, tol: float = 1e-10, max_panels: int = 4000) -> QuadratureResult:
    """Globally adaptive GK15: bisect the worst panel until the summed error is below tol.

    `f` must accept a numpy array of abscissae.
    """
    if b == a:
        return QuadratureResult(0.0, 0.0, 0)
    panels = [(a, b, *gk15(f, a, b))]
    evals = 15
    while True:
        err = math.fsum(p[3] for p in panels)
        if err <= tol or len(panels) >= max_panels:
            break
        i = max(range(len(panels)), key=lambda k: panels[k][3])
        lo, hi, _, _ = panels.pop(i)
        mid = 0.5 * (lo + hi)
        panels.append((lo, mid, *gk15(f, lo, mid)))
        panels.append((mid, hi, *gk15(f, mid, hi)))
        evals += 30
    value = math.fsum(p[2] for p in panels)
    return QuadratureResult(value, err, evals, err <= tol)


# -- I1, I2 and H -------------------------------------------------------------

def arcosh_integral(s: float, tol: float = 1e-12) -> QuadratureResult:
    """int_1^s dt / sqrt(t (t - 1)) after t = 1 + u^2: int_0^sqrt(s-1) 2 / sqrt(1 + u^2) du."""
    if s < 1:
        raise DomainError("need s >= 1")
    return integrate(lambda u: 2.0 / np.sqrt(1.0 + u * u), 0.0, math.sqrt(s - 1.0), tol)


def arcosh_closed(s: float) -> float:
    return 2.0 * math.log(math.sqrt(s) + math.sqrt(s - 1.0))


def I1(rho2: float, sigma: float, tol: float = 1e-10) -> QuadratureResult:
    s = rho2 * sigma
    if s <= 1:
        raise DomainError("rho2 * sigma must exceed 1")
    r = arcosh_integral(s, tol * 2 * math.sqrt(rho2))
    c = 1.0 / (2.0 * math.sqrt(rho2))
    return QuadratureResult(c * r.value, c * r.abs_error_estimate, r.evaluations, r.converged)


def I1_closed(rho2: float, sigma: float) -> float:
    s = rho2 * sigma
    return math.log(math.sqrt(s) + math.sqrt(s - 1.0)) / math.sqrt(rho2)


def _i2_integrand(sigma: float):
    # t = sigma (1 - v^2): dt / sqrt(1 - t/sigma) = -2 sigma dv, 1/t = 1/(sigma (1 - v^2))
    def g(v):
        w = 1.0 - v * v
        return 2.0 * np.log(sigma * w - 1.0) / w
    return g


def I2(rho1: float, sigma: float, tol: float = 1e-10) -> QuadratureResult:
    if sigma <= 2:
        raise DomainError("sigma must exceed 2")
    vmax = math.sqrt(1.0 - 2.0 / sigma)
    r = integrate(_i2_integrand(sigma), 0.0, vmax, tol * 2 * rho1)
    c = 1.0 / (2.0 * rho1)
    return QuadratureResult(c * r.value, c * r.abs_error_estimate, r.evaluations, r.converged)


def I2_midpoint(rho1: float, sigma: float, n: int = 10**7, chunk: int = 10**6) -> float:
    """Midpoint rule on the substituted I2 integrand; independent oracle."""
    vmax = math.sqrt(1.0 - 2.0 / sigma)
    h = vmax / n
    g = _i2_integrand(sigma)
    parts = []
    for lo in range(0, n, chunk):
        k = np.arange(lo, min(lo + chunk, n), dtype=np.float64)
        parts.append(float(np.sum(g((k + 0.5) * h))))
    return math.fsum(parts) * h / (2.0 * rho1)


@dataclass(frozen=True)
class HParams:
    rho1: float
    rho2: float
    sigma: float

    def warnings(self) -> list[str]:
        out = []
        if not 1 / 3 < self.rho2 < self.rho1 < 1 / 2:
            out.append("expected 1/3 < rho2 < rho1 < 1/2")
        if not 3 < self.sigma < 4:
            out.append("expected 3 < sigma < 4")
        return out


@dataclass(frozen=True)
class HCheck:
    holds: bool
    margin: float
    error: float
    i1: float
    i2: float
    warnings: tuple[str, ...] = ()


def check_H(p: HParams, tol: float = 1e-6) -> HCheck:
    """H holds iff I1 > I2 + 1e-10, decided with the quadrature error taken into account."""
    a = I1(p.rho2, p.sigma, tol)
    b = I2(p.rho1, p.sigma, tol)
    margin = a.value - b.value - H_GAP
    err = a.abs_error_estimate + b.abs_error_estimate
    return HCheck(margin > err, margin, err, a.value, b.value, tuple(p.warnings()))


# -- sieve functions ----------------------------------------------------------

def sieve_f(s: float, tol: float = 1e-12) -> float:
    if s < 1:
        raise DomainError("f(s) needs s >= 1")
    return math.sqrt(math.exp(EULER_GAMMA) / (math.pi * s)) * arcosh_integral(s, tol).value


def sieve_F(s: float) -> float:
    if s <= 0:
        raise DomainError("F(s) needs s > 0")
    return 2.0 * math.exp(EULER_GAMMA) / s


# -- Euler products -----------------------------------------------------------

def frak_f(d: int) -> Fraction:
    out = Fraction(1)
    for p, _ in factorize(d).factors:
        if p > 2:
            out /= 1 - Fraction(1, p - 1)
    return out


def V_sem(z: float, K: int) -> Fraction:
    """prod over p < z, p = 3 mod 4, p not dividing K, of (1 - 1/(p - 1))."""
    out = Fraction(1)
    for p in _small_sieve(math.ceil(z)):
        p = int(p)
        if p < z and p % 4 == 3 and K % p:
            out *= Fraction(p - 2, p - 1)
    return out


def V_lin(z: float, K: int, ell: int) -> Fraction:
    """prod over 2 < p < z, p not dividing K ell, of (1 - 1/(p - 1))."""
    out = Fraction(1)
    for p in _small_sieve(math.ceil(z)):
        p = int(p)
        if 2 < p < z and (K * ell) % p:
            out *= Fraction(p - 2, p - 1)
    return out


@dataclass(frozen=True)
class EulerConstants:
    P_trunc: int
    A: float
    C41: float
    C4m1: float


def euler_products(P_trunc: int) -> EulerConstants:
    """A, C_{4,1} and C_{4,-1}, products over primes <= P_trunc (log-sum accumulation)."""
    if P_trunc > 10**9:
        raise ValueError("truncation beyond 10^9")
    ps = sieve_primes(max(P_trunc, 2)).primes().astype(np.float64)
    r1 = ps[(ps.astype(np.int64) % 4) == 1]
    r3 = ps[(ps.astype(np.int64) % 4) == 3]
    logA = -1.5 * math.log(2.0) + 0.5 * math.fsum(np.log1p(-1.0 / (r3 * r3)).tolist())
    c41 = math.fsum(np.log1p(-1.0 / ((r1 - 1) ** 2)).tolist())
    c43 = math.fsum(np.log1p(-1.0 / ((r3 - 1) ** 2)).tolist())
    return EulerConstants(P_trunc, math.exp(logA), math.exp(c41), math.exp(c43))


# -- singular product ---------------------------------------------------------

def local_factor(L: LinearForm, p: int) -> Fraction:
    """Normalized local density at p.

    Two sifted classes (L = 0 or 1) for p = 3 mod 4 with p != 3, one sifted
    class (L = 0) otherwise, including p = 3.
    """
    if p % 4 == 3 and p != 3:
        cnt = sum(1 for n in range(p) if (L(n) % p) in (0, 1))
        return (1 - Fraction(cnt, p)) / (1 - Fraction(2, p))
    cnt = sum(1 for n in range(p) if L(n) % p == 0)
    return (1 - Fraction(cnt, p)) / (1 - Fraction(1, p))


def singular_product(L: LinearForm) -> Fraction:
    """Exact value: local factors at p not dividing K are identically 1."""
    out = Fraction(1)
    for p, _ in factorize(L.K).factors:
        out *= local_factor(L, p)
        if out == 0:
            return out
    return out


def singular_product_truncated(L: LinearForm, P: int) -> Fraction:
    """Product of local factors over every prime p <= P; equals singular_product once P covers K."""
    out = Fraction(1)
    for p in _small_sieve(P):
        out *= local_factor(L, int(p))
    return out
