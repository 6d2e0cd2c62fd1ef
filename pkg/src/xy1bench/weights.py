"""Combinatorial sieve-weight supports and the factorization d = d1 d2 of their members.

A member d = p1 p2 ... pr (p1 > p2 > ... > pr) is squarefree with every
prime below z, d <= x^rho, and satisfies the chain inequalities of its kind:

    LIN_PLUS   p1 ... p_{2k-2} p_{2k-1}^3 <= x^rho
    SEM_MINUS  p1 ... p_{2k-1} p_{2k}^2   <= x^rho
    SEM_PLUS   p1 ... p_{2k-2} p_{2k-1}^2 <= x^rho

for every k whose indexed prime exists.
"""
from __future__ import annotations

import bisect
import enum
import itertools
import math
from dataclasses import dataclass

from .arith import factorize, _small_sieve

REL_GUARD = 1e-12


class Kind(enum.Enum):
    LIN_PLUS = "LIN_PLUS"
    SEM_MINUS = "SEM_MINUS"
    SEM_PLUS = "SEM_PLUS"


class LemmaViolation(RuntimeError):
    pass


def default_rho(kind: Kind, theta: float, eps: float) -> float:
    base = {Kind.LIN_PLUS: 0.5, Kind.SEM_MINUS: 3 / 7, Kind.SEM_PLUS: 2 / 5}[kind]
    return base * (1 - 4 * theta) - eps


def max_z(kind: Kind, x: float, theta: float, eps: float) -> float:
    if kind is Kind.SEM_MINUS:
        return x ** (1 / 3 - 2 * theta - 2 * eps * eps)
    return x**0.5


@dataclass(frozen=True)
class SieveSupport:
    kind: Kind
    x: float
    rho: float
    z: float
    theta: float = 0.0
    eps: float = 0.01

    @classmethod
    def standard(cls, kind: Kind, x: float, theta: float = 0.0, eps: float = 0.01, z: float | None = None):
        """Support with the lemma's rho and the largest admissible z."""
        zz = max_z(kind, x, theta, eps) if z is None else z
        return cls(kind, x, default_rho(kind, theta, eps), zz, theta, eps)

    @property
    def level(self) -> float:
        return self.x**self.rho

    def flags(self) -> list[str]:
        out = []
        if self.rho > default_rho(self.kind, self.theta, self.eps) * (1 + REL_GUARD):
            out.append("rho above the lemma's exponent")
        if self.z > max_z(self.kind, self.x, self.theta, self.eps) * (1 + REL_GUARD):
            out.append("z above the admissible bound")
        return out


def _le(a: float, b: float) -> bool:
    return a <= b * (1 + REL_GUARD)


def _chain_ok(kind: Kind, primes_desc: list[int], level: float) -> bool:
    r = len(primes_desc)
    if kind is Kind.SEM_MINUS:
        # k-th condition uses p_{2k}: prefix of length 2k-1 times p_{2k}^2
        idx, power = range(1, r, 2), 2
    elif kind is Kind.SEM_PLUS:
        idx, power = range(0, r, 2), 2
    else:
        idx, power = range(0, r, 2), 3
    for i in idx:
        prefix = math.prod(primes_desc[:i])
        if not _le(prefix * primes_desc[i] ** power, level):
            return False
    return True


def in_support(S: SieveSupport, d: int) -> bool:
    if d == 1:
        return True
    if not _le(d, S.level):
        return False
    f = factorize(d).factors
    if any(e > 1 for _, e in f):
        return False
    ps = sorted((p for p, _ in f), reverse=True)
    if ps[0] >= S.z:
        return False
    return _chain_ok(S.kind, ps, S.level)


def weight(S: SieveSupport, d: int) -> int:
    if not in_support(S, d):
        return 0
    r = len(factorize(d).factors)
    return -1 if r % 2 else 1


def enumerate_support(S: SieveSupport) -> list[int]:
    """All members, ascending.  Depth-first over decreasing primes with chain pruning."""
    level = S.level
    if level > 1e7 * (1 + REL_GUARD):
        raise MemoryError("x^rho beyond desk scale (1e7)")
    primes = [int(p) for p in _small_sieve(int(min(S.z, level)) + 1) if p < S.z and _le(p, level)]
    out = [1]
    power = 3 if S.kind is Kind.LIN_PLUS else 2
    chain_pos = (lambda r: r % 2 == 1) if S.kind is Kind.SEM_MINUS else (lambda r: r % 2 == 0)

    def extend(chosen: list[int], prod: int, below: int):
        # Only the newest prime's inequality is new, and it is monotone in p,
        # so every prime below the cutoff extends the member.
        room = level / prod
        cap = room ** (1 / power) if chain_pos(len(chosen)) else room
        top = min(below, bisect.bisect_right(primes, cap * (1 + 1e-9)))
        for i in range(top - 1, -1, -1):
            p = primes[i]
            cand = chosen + [p]
            if not (_le(prod * p, level) and _chain_ok(S.kind, cand, level)):
                continue
            out.append(prod * p)
            extend(cand, prod * p, i)

    extend([], 1, len(primes))
    out.sort()
    return out


# -- splitting ----------------------------------------------------------------

@dataclass(frozen=True)
class SplitResult:
    d: int
    d1: int
    d2: int
    D: float
    fallback: bool = False


def split_bound(S: SieveSupport, D: float) -> float:
    return S.x ** (1 - 4 * S.theta - 2 * S.eps**2) / D


def split_valid(S: SieveSupport, d1: int, d2: int, D: float) -> bool:
    return (
        math.gcd(d1, d2) == 1
        and _le(d1, D)
        and _le(d1 * d2 * d2, split_bound(S, D))
        and (d2 == 1 or d1 >= S.x**0.1 * (1 - REL_GUARD))
    )


def _exhaustive_split(S: SieveSupport, ps: list[int], D: float) -> tuple[int, int] | None:
    for mask in itertools.product((0, 1), repeat=len(ps)):
        d1 = math.prod(p for p, m in zip(ps, mask) if m)
        d2 = math.prod(p for p, m in zip(ps, mask) if not m)
        if split_valid(S, d1, d2, D):
            return d1, d2
    return None


def _finish(S: SieveSupport, d: int, ps: list[int], d1: int, d2: int, D: float) -> SplitResult:
    if split_valid(S, d1, d2, D):
        return SplitResult(d, d1, d2, D)
    found = _exhaustive_split(S, ps, D)
    if found is None:
        raise LemmaViolation(f"no valid split of {d} at D={D}")
    return SplitResult(d, found[0], found[1], D, fallback=True)


def _primes_desc(d: int) -> list[int]:
    return sorted(factorize(d).primes(), reverse=True)


def split_linear(S: SieveSupport, d: int, D: float) -> SplitResult:
    """Inductive rule for the linear support, primes taken in decreasing order."""
    ps = _primes_desc(d)
    small = S.x**0.1
    d1 = d2 = 1
    for p in ps:
        if d1 < small or _le(d1 * p, D):
            d1 *= p
        else:
            d2 *= p
    return _finish(S, d, ps, d1, d2, D)


def split_semilinear(S: SieveSupport, d: int, D: float) -> SplitResult:
    """Greedy prefix rule for the semilinear supports."""
    ps = _primes_desc(d)
    if _le(d, D):
        return _finish(S, d, ps, d, 1, D)
    d1 = 1
    for p in ps:
        if not _le(d1 * p, D):
            break
        d1 *= p
    return _finish(S, d, ps, d1, d // d1, D)


def split(S: SieveSupport, d: int, D: float) -> SplitResult:
    if S.kind is Kind.LIN_PLUS:
        return split_linear(S, d, D)
    return split_semilinear(S, d, D)


def split_range(S: SieveSupport) -> tuple[float, float]:
    """Admissible D interval: [x^(1/5), x^rho] for the linear support,
    [x^(1/3 - 2 theta - 2 eps^2), x^rho] for the semilinear ones."""
    lo = 0.2 if S.kind is Kind.LIN_PLUS else 1 / 3 - 2 * S.theta - 2 * S.eps**2
    return S.x**lo, S.level


@dataclass
class SplitScan:
    members: int
    fallbacks: int
    violations: list[int]


def scan_splits(S: SieveSupport, D: float) -> SplitScan:
    members = enumerate_support(S)
    fallbacks = 0
    bad = []
    for d in members:
        try:
            r = split(S, d, D)
        except LemmaViolation:
            bad.append(d)
            continue
        fallbacks += r.fallback
    return SplitScan(len(members), fallbacks, bad)


# -- optimality of the semilinear exponents -----------------------------------

@dataclass(frozen=True)
class Counterexample:
    support: SieveSupport
    D: float
    d: int
    primes: tuple[int, ...]


def optimality_counterexample(kind: Kind, x: float, theta: float, eps: float) -> Counterexample | None:
    """Search for a member of the support at inflated rho that admits no split.

    SEM_MINUS: rho = (3/7)(1-4 theta) + 3 eps, D = x^((3/7)(1-4 theta)), d a product
    of three primes in [X/2, X) with X = x^((1-4 theta)/7 + eps).
    SEM_PLUS: rho = (2/5)(1-4 theta) + 2 eps, D = x^((2/5)(1-4 theta)), two primes
    in [X/2, X) with X = x^((1-4 theta)/5 + eps).
    """
    c = 1 - 4 * theta
    if kind is Kind.SEM_MINUS:
        rho, D, X, r = 3 / 7 * c + 3 * eps, x ** (3 / 7 * c), x ** (c / 7 + eps), 3
    elif kind is Kind.SEM_PLUS:
        rho, D, X, r = 2 / 5 * c + 2 * eps, x ** (2 / 5 * c), x ** (c / 5 + eps), 2
    else:
        raise ValueError("only the semilinear supports have this remark")
    S = SieveSupport(kind, x, rho, x**0.5, theta, eps)
    window = [int(p) for p in _small_sieve(int(X)) if X / 2 <= p < X]
    for combo in itertools.combinations(sorted(window, reverse=True), r):
        d = math.prod(combo)
        if not in_support(S, d):
            continue
        if _exhaustive_split(S, list(combo), D) is None:
            return Counterexample(S, D, d, combo)
    return None
