"""Desk-scale scans: binary and ternary Goldbach over P, 3-APs in P*, the
fractional parts of xi p, arc classification and the Lambda(n) e(alpha n)
harness over sieve-weight supports."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import InvalidArgument, mangoldt_table, sieve_primes
from .weights import Kind, SieveSupport, enumerate_support


def _p_table(N: int):
    T = sieve_primes(max(N, 2))
    ps = T.P_primes()
    mask = np.zeros(N + 1, dtype=bool)
    mask[ps[ps <= N]] = True
    return ps[ps <= N], mask


def eligible(n: np.ndarray) -> np.ndarray:
    """Even n >= 4 outside the classes 5, 8 mod 9."""
    return (n % 2 == 0) & (n >= 4) & (n % 9 != 5) & (n % 9 != 8)


@dataclass
class GoldbachReport:
    N: int
    ternary: bool
    exceptions: list[int]
    rep_counts: np.ndarray = field(repr=False)        # r(n) for n <= N (binary); 0/1 existence (ternary)
    density_by_decade: list[tuple[int, float]]
    obstructed_ok: bool = True                         # every representation of n = 5, 8 mod 9 uses 3
    obstructed_checked_to: int = 0


def binary_counts(N: int) -> np.ndarray:
    """r(n) = #{p <= q in P : p + q = n} for 0 <= n <= N."""
    ps, _ = _p_table(N)
    r = np.zeros(N + 1, dtype=np.int32)
    for i, p in enumerate(ps):
        p = int(p)
        if 2 * p > N:
            break
        hi = np.searchsorted(ps, N - p, side="right")
        r[p + ps[i:hi]] += 1
    return r


def _decades(N: int, bad: np.ndarray, elig: np.ndarray) -> list[tuple[int, float]]:
    out = []
    k = 3
    while 10**k <= N:
        lim = 10**k
        tot = int(elig[: lim + 1].sum())
        out.append((lim, int(bad[: lim + 1].sum()) / tot if tot else 0.0))
        k += 1
    return out


def goldbach_scan(N: int, ternary: bool = False, obstructed_to: int = 10**5) -> GoldbachReport:
    if ternary:
        return _ternary_scan(N)
    if N > 10**8:
        raise InvalidArgument("binary scan limited to N <= 10^8")
    r = binary_counts(N)
    n = np.arange(N + 1)
    elig = eligible(n)
    bad = elig & (r == 0)
    exceptions = np.flatnonzero(bad).tolist()

    # n = 5, 8 mod 9: the only pair can be (3, n - 3)
    _, mask = _p_table(N)
    lim = min(N, obstructed_to)
    obs = (n[: lim + 1] % 2 == 0) & np.isin(n[: lim + 1] % 9, (5, 8))
    with3 = np.zeros(lim + 1, dtype=np.int32)
    m = n[: lim + 1] - 3
    ok = m >= 3
    with3[ok] = mask[m[ok]]
    obstructed_ok = bool(np.all(r[: lim + 1][obs] == with3[obs]))
    return GoldbachReport(N, False, exceptions, r, _decades(N, bad, elig), obstructed_ok, lim)


def _ternary_scan(N: int) -> GoldbachReport:
    if N > 10**6:
        raise InvalidArgument("ternary scan limited to N <= 10^6")
    ps, _ = _p_table(N)
    two = binary_counts(N) > 0
    n = np.arange(N + 1)
    todo = n[(n % 2 == 1) & (n >= 7)]
    found = np.zeros(N + 1, dtype=bool)
    for p in ps:
        p = int(p)
        if todo.size == 0 or p > N:
            break
        m = todo - p
        hit = (m >= 4) & two[np.maximum(m, 0)]
        found[todo[hit]] = True
        todo = todo[~hit]
    odd = (n % 2 == 1) & (n >= 7)
    bad = odd & ~found
    return GoldbachReport(N, True, np.flatnonzero(bad).tolist(), found.astype(np.int32), _decades(N, bad, odd))


def find_representation(n: int, mask: np.ndarray) -> tuple[int, int] | None:
    """Smallest p <= n/2 with p, n - p both flagged in mask."""
    for p in range(2, n // 2 + 1):
        if mask[p] and mask[n - p]:
            return p, n - p
    return None


def verify_exceptions(report: GoldbachReport) -> bool:
    """Re-check every listed binary exception with a direct pair search."""
    ps, mask = _p_table(report.N)
    for n in report.exceptions:
        lo = ps[2 * ps <= n]
        if mask[n - lo].any():
            return False
    return True


@dataclass(frozen=True)
class BlockSummary:
    lo: int
    hi: int
    count: int
    q1: float
    median: float
    q3: float


def normalized_values(r: np.ndarray, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    n = np.arange(lo, min(hi, r.size))
    n = n[eligible(n)]
    return n, r[n] * np.log(n) ** 3 / n


def summarize(values: np.ndarray, lo: int, hi: int) -> BlockSummary | None:
    if values.size == 0:
        return None
    q1, med, q3 = np.percentile(values, [25, 50, 75])
    return BlockSummary(lo, hi, int(values.size), float(q1), float(med), float(q3))


def normalized_rep_statistic(report: GoldbachReport, lo: int, hi: int) -> list[BlockSummary]:
    """Quartiles of r(n) (log n)^3 / n per dyadic block [2^k, 2^(k+1)) clipped to [lo, hi)."""
    if report.ternary:
        raise InvalidArgument("needs a binary report")
    out = []
    if hi <= lo:
        return out
    k = max(1, int(math.floor(math.log2(max(lo, 2)))))
    while 2**k < hi:
        a, b = max(lo, 2**k), min(hi, 2 ** (k + 1))
        if a < b:
            _, v = normalized_values(report.rep_counts, a, b)
            s = summarize(v, a, b)
            if s is not None:
                out.append(s)
        k += 1
    return out


# -- 3-APs in P* ----------------------------------------------------------------

def pstar_mask(N: int) -> np.ndarray:
    T = sieve_primes(max(N, 2))
    ps = T.Pstar_primes()
    mask = np.zeros(N + 1, dtype=bool)
    mask[ps[ps <= N]] = True
    return mask


def ap3_count(N: int) -> int:
    """Nontrivial (a, a + d, a + 2d), d >= 1, inside P* intersected with [1, N]."""
    if N > 10**6:
        raise InvalidArgument("N <= 10^6")
    mask = pstar_mask(N)
    ps = np.flatnonzero(mask)
    total = 0
    for i, b in enumerate(ps):
        lower = ps[:i]
        c = 2 * int(b) - lower
        lower_ok = c <= N
        total += int(mask[c[lower_ok]].sum())
    return total


def ap3_bruteforce(N: int) -> int:
    s = np.flatnonzero(pstar_mask(N)).tolist()
    cnt = 0
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            for k in range(j + 1, len(s)):
                if s[i] + s[k] == 2 * s[j]:
                    cnt += 1
    return cnt


# -- fractional parts of xi p ---------------------------------------------------

@dataclass
class AlphaPScan:
    xi: float
    kappa: float
    theta: float
    checkpoints: list[int]
    counts: list[int]
    discrepancy: list[float]
    residue_classes: dict[int, int] = field(default_factory=dict)


def star_discrepancy(x: np.ndarray) -> float:
    """D* of points in [0, 1)."""
    if x.size == 0:
        return 0.0
    s = np.sort(x)
    n = s.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - s), np.max(s - (i - 1) / n)))


def alphap_scan(xi: float, kappa: float, theta: float, checkpoints: list[int], class_mod: int = 0) -> AlphaPScan:
    """Count p in P, p <= N with ||xi p + kappa|| <= p^-theta at each checkpoint N.

    With class_mod > 0, the qualifying primes up to the last checkpoint are
    also tallied by residue mod class_mod.
    """
    if not 0 < theta < 1:
        raise InvalidArgument("theta must lie in (0, 1)")
    top = max(checkpoints)
    ps, _ = _p_table(top)
    pf = ps.astype(np.float64)
    t = xi * pf + kappa
    dist = np.abs(t - np.round(t))
    good = dist <= pf ** (-theta)
    frac = np.mod(xi * pf, 1.0)
    counts, disc = [], []
    for N in sorted(checkpoints):
        k = int(np.searchsorted(ps, N, side="right"))
        counts.append(int(good[:k].sum()))
        disc.append(star_discrepancy(frac[:k]))
    classes = {}
    if class_mod:
        vals, cnt = np.unique(ps[good] % class_mod, return_counts=True)
        classes = {int(v): int(c) for v, c in zip(vals, cnt)}
    return AlphaPScan(xi, kappa, theta, sorted(checkpoints), counts, disc, classes)


# -- arcs -----------------------------------------------------------------------

@dataclass(frozen=True)
class ArcClass:
    alpha: float
    a: int
    q: int
    err: float
    classification: str          # "major", "minor" or "unclassified"


def convergents(x: Fraction, qmax: int) -> list[tuple[int, int]]:
    """Continued-fraction convergents a/q of x with q <= qmax."""
    out = []
    h0, h1, k0, k1 = 0, 1, 1, 0
    while True:
        a = math.floor(x)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > qmax:
            break
        out.append((h1, k1))
        frac = x - a
        if frac == 0:
            break
        x = 1 / frac
    return out


def classify_arc(alpha: float, N: int, Q: int, A: float = 3.0, qmax: int | None = None) -> ArcClass:
    """Last convergent with q <= qmax (default N / log N); major iff q | Q,
    minor iff q / gcd(q, Q^2) >= (log N)^A."""
    L = math.log(N)
    qmax = int(N / L) if qmax is None else qmax
    cs = convergents(Fraction(alpha), max(qmax, 1))
    a, q = cs[-1]
    err = abs(Fraction(alpha) - Fraction(a, q))
    if Q % q == 0:
        cls = "major"
    elif q / math.gcd(q, Q * Q) >= L**A:
        cls = "minor"
    else:
        cls = "unclassified"
    return ArcClass(alpha, a, q, float(err), cls)


# -- the Lambda(n) e(alpha n) harness -----------------------------------------

@dataclass
class BVResult:
    N: int
    alpha: float
    b: int
    kind: str
    total: float
    rows: list[tuple[int, int, float]]        # (d, lambda_d, |inner sum|)
    arc: ArcClass | None = None


def _phase(alpha: float, n: int) -> tuple[float, float]:
    t = 2 * math.pi * ((alpha * n) % 1.0)
    return math.cos(t), math.sin(t)


def bv_harness(S: SieveSupport, alpha: float, b: int, N: int, Q: int = 6, A: float = 3.0) -> BVResult:
    """sum over d <= N^rho, gcd(d, b) = 1 of |lambda_d sum_{N <= n < 2N, n = b mod d} Lambda(n) e(alpha n)|."""
    if b == 0:
        raise InvalidArgument("b must be nonzero")
    if N > 10**6:
        raise InvalidArgument("N <= 10^6")
    lam = mangoldt_table(N, 2 * N)
    idx = np.flatnonzero(lam)
    ns = (idx + N).tolist()
    re, im = [], []
    for n, l in zip(ns, lam[idx].tolist()):
        c, s = _phase(alpha, n)
        re.append(l * c)
        im.append(l * s)
    ns_arr = np.array(ns, dtype=np.int64)
    level = N**S.rho
    rows, parts = [], []
    for d in enumerate_support(S):
        if d > level * (1 + 1e-12) or math.gcd(d, b) != 1:
            continue
        sign = -1 if _omega(d) % 2 else 1
        sel = np.flatnonzero(ns_arr % d == b % d).tolist()
        v = math.hypot(math.fsum(re[i] for i in sel), math.fsum(im[i] for i in sel))
        rows.append((d, sign, v))
        parts.append(v)
    arc = classify_arc(alpha, N, Q, A)
    return BVResult(N, alpha, b, S.kind.value, math.fsum(parts), rows, arc)


def _omega(d: int) -> int:
    k, p = 0, 2
    while p * p <= d:
        if d % p == 0:
            k += 1
            d //= p
        else:
            p += 1
    return k + (d > 1)


def _lambda_naive(S: SieveSupport, d: int) -> int:
    """Sieve weight from first principles: trial division and every chain inequality."""
    if d == 1:
        return 1
    if d > S.x**S.rho * (1 + 1e-12):
        return 0
    ps, m, p = [], d, 2
    while m > 1:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            ps.append(p)
        p += 1
    if max(ps) >= S.z:
        return 0
    ps.sort(reverse=True)
    level = S.x**S.rho
    for i, p in enumerate(ps):
        if S.kind is Kind.LIN_PLUS:
            need = i % 2 == 0
            power = 3
        elif S.kind is Kind.SEM_PLUS:
            need, power = i % 2 == 0, 2
        else:
            need, power = i % 2 == 1, 2
        if need and math.prod(ps[:i]) * p**power > level * (1 + 1e-12):
            return 0
    return -1 if len(ps) % 2 else 1


def _mangoldt_naive(n: int) -> float:
    for p in range(2, n + 1):
        if n % p == 0:
            while n % p == 0:
                n //= p
            return math.log(p) if n == 1 else 0.0
    return 0.0


def bv_bruteforce(S: SieveSupport, alpha: float, b: int, N: int) -> float:
    """Oracle: triple loop over d, n with independent Lambda and lambda_d."""
    level = N**S.rho
    parts = []
    for d in range(1, int(level * (1 + 1e-12)) + 1):
        if math.gcd(d, b) != 1:
            continue
        lam = _lambda_naive(S, d)
        if lam == 0:
            continue
        re, im = [], []
        for n in range(N, 2 * N):
            if (n - b) % d:
                continue
            L = _mangoldt_naive(n)
            if L == 0.0:
                continue
            c, s = _phase(alpha, n)
            re.append(L * c)
            im.append(L * s)
        parts.append(math.hypot(math.fsum(re), math.fsum(im)))
    return math.fsum(parts)
