"""Linear forms Kn + b, amenability, the moduli U and W, the local lemmas
mod 2^J and mod 27, and the residue set Q with its exponential-sum check."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .arith import InvalidArgument, factorize, s_of, _small_sieve


@dataclass(frozen=True)
class LinearForm:
    K: int
    b: int

    def __post_init__(self):
        if self.K < 1:
            raise InvalidArgument("K must be positive")

    def __call__(self, n: int) -> int:
        return self.K * n + self.b


@dataclass(frozen=True)
class Amenability:
    ok: bool
    j: int | None = None
    t: int | None = None
    h: int | None = None
    clause: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def _val(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_amenable(L: LinearForm) -> Amenability:
    K, b = L.K, L.b
    if K % 216:
        return Amenability(False, clause="(i) 216 does not divide K")
    if math.gcd(b, K) != 1:
        return Amenability(False, clause="(ii) gcd(b, K) > 1")
    if math.gcd(b - 1, s_of(K)) != 1:
        return Amenability(False, clause="(ii) gcd(b - 1, s(K)) > 1")
    if b == 1:
        return Amenability(False, clause="(iii) b - 1 = 0")
    c = b - 1
    j = _val(c, 2)
    v3 = _val(c, 3)
    if v3 % 2:
        return Amenability(False, clause="(iii) v_3(b - 1) odd")
    t = v3 // 2
    m = c // (2**j * 3**v3)
    if m % 4 != 1:
        return Amenability(False, clause="(iii) odd part not 1 mod 4")
    if K % (2 ** (j + 2) * 3 ** (2 * t + 1)):
        return Amenability(False, clause="(iii) 2^(j+2) 3^(2t+1) does not divide K")
    return Amenability(True, j=j, t=t, h=(m - 1) // 4)


@dataclass(frozen=True)
class ModulusW:
    J: int
    w: int
    U: int
    W: int

    def small_primes(self) -> list[int]:
        return [int(p) for p in _small_sieve(self.w) if p >= 5]


def build_W(J: int, w: int) -> ModulusW:
    if J < 5 or w < 5:
        raise InvalidArgument("need J >= 5 and w >= 5")
    U = 2**J * 27
    W = U
    for p in _small_sieve(w):
        if p >= 5:
            W *= int(p)
    if W >= 2**63:
        raise OverflowError("W exceeds 63 bits")
    return ModulusW(J, w, U, W)


# -- the 2-adic lemma ---------------------------------------------------------

def _two_adic_classes(J: int) -> np.ndarray:
    """Residues a mod 2^J with a = 2^i mod 2^(i+2) for some 0 <= i <= J-3, ascending."""
    M = 1 << J
    out = []
    for i in range(J - 2):
        out.append(np.arange(1 << i, M, 1 << (i + 2)))
    return np.sort(np.concatenate(out))


@dataclass
class Lemma2adicReport:
    J: int
    ok: bool
    counterexamples: list[int]
    witness: dict[int, tuple[int, int]] = field(repr=False, default_factory=dict)


def check_lemma_2adic(J: int) -> Lemma2adicReport:
    """Exhaustive check over Z/2^J; the witness is the pair with smallest first entry."""
    if not 5 <= J <= 20:
        raise InvalidArgument("J must lie in [5, 20]")
    M = 1 << J
    A = _two_adic_classes(J)
    inA = np.zeros(M, dtype=bool)
    inA[A] = True
    n = np.arange(M)
    todo = n[n % (M >> 1) != 0]
    first = np.full(M, -1, dtype=np.int64)
    for a in A:
        if todo.size == 0:
            break
        hit = inA[(todo - a) % M]
        first[todo[hit]] = a
        todo = todo[~hit]
    bad = [int(x) for x in todo]
    witness = {int(k): (int(first[k]), int((k - first[k]) % M)) for k in np.flatnonzero(first >= 0)}
    return Lemma2adicReport(J, not bad, bad, witness)


def split_2adic(n: int, J: int) -> tuple[int, int]:
    """Smallest-first-entry decomposition n = a + b mod 2^J from the 2-adic lemma."""
    M = 1 << J
    n %= M
    if n % (M >> 1) == 0:
        raise InvalidArgument("n = 0 mod 2^(J-1) is outside the lemma")
    A = _two_adic_classes(J)
    inA = set(int(a) for a in A)
    for a in A:
        if (n - int(a)) % M in inA:
            return int(a), (n - int(a)) % M
    raise AssertionError("2-adic lemma failed")


def two_adic_index(a: int) -> int:
    """The i with a = 2^i mod 2^(i+2)."""
    return _val(a, 2)


# -- the mod 27 lemma ---------------------------------------------------------

def _squares_mod27() -> dict[int, tuple[int, int]]:
    reps: dict[int, tuple[int, int]] = {}
    for x in range(27):
        for y in range(27):
            reps.setdefault((x * x + y * y) % 27, (x, y))
    return reps


@dataclass(frozen=True)
class Decomposition27:
    a1: int
    a2: int
    witness1: tuple[int, int]
    witness2: tuple[int, int]


def check_lemma_27(m_prime: int) -> Decomposition27 | None:
    """Split m' mod 27 into two admissible sums of two squares, or None if m' = 3, 6 mod 9."""
    m = m_prime % 27
    if m % 9 in (3, 6):
        return None
    reps = _squares_mod27()
    adm = [a for a in range(1, 27) if a % 9 in (0, 2, 5, 8) and a in reps]
    for a1 in adm:
        a2 = (m - a1) % 27
        if a2 in adm:
            return Decomposition27(a1, a2, reps[a1], reps[a2])
    raise AssertionError(f"no decomposition for {m}")


def amenable_residues(K: int) -> list[int]:
    return [b for b in range(K) if is_amenable(LinearForm(K, b))]


def mod27_obstruction() -> dict[int, bool]:
    """For each m mod 27 with m = 5, 8 mod 9: whether some pair of amenable
    offsets (taken mod 864 = 2^5 * 27) sums to m mod 27.  All values should be False."""
    res27 = sorted({b % 27 for b in amenable_residues(864)})
    sums = {(x + y) % 27 for x in res27 for y in res27}
    return {m: m in sums for m in range(27) if m % 9 in (5, 8)}


# -- B1/B2 construction -------------------------------------------------------

def _crt(residues: list[tuple[int, int]]) -> int:
    x, M = 0, 1
    for r, m in residues:
        # solve x + M k = r mod m
        k = ((r - x) * pow(M, -1, m)) % m
        x += M * k
        M *= m
    return x % M


def decompose_goldbach_residue(m: int, M: ModulusW) -> tuple[int, int]:
    """Offsets B1 + B2 = m mod W with W n + B1 and W n + B2 both amenable."""
    if m % 2:
        raise InvalidArgument("m must be even")
    if m % 9 in (5, 8):
        raise InvalidArgument("m = 5, 8 mod 9 is locally obstructed")
    if m % (1 << M.J) == 2:
        raise InvalidArgument("m = 2 mod 2^J is excluded")
    mp = (m - 2) // 2
    a1, _ = split_2adic(mp, M.J)
    dec = check_lemma_27(mp)
    assert dec is not None
    congr = [(2 * a1 + 1, 1 << M.J), ((2 * dec.a1 + 1) % 27, 27)]
    for p in M.small_primes():
        bad = {0, 1, m % p, (m - 1) % p}
        bp = next(r for r in range(2, p + 2) if r % p not in bad)
        congr.append((bp % p, p))
    B1 = _crt(congr)
    B2 = (m - B1) % M.W
    for B in (B1, B2):
        ev = is_amenable(LinearForm(M.W, B))
        if not ev:
            raise AssertionError(f"constructed offset {B} not amenable: {ev.clause}")
    return B1, B2


# -- the residue set Q --------------------------------------------------------

@dataclass(frozen=True)
class ResidueSetQ:
    Q: int
    W: int
    b: int
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)


def residue_set_Q(Q: int, W: int, b: int) -> ResidueSetQ:
    if Q < 1:
        raise InvalidArgument("Q must be positive")
    sQ = s_of(Q)
    members = tuple(
        int(c0) for c0 in range(Q)
        if math.gcd(W * c0 + b, Q) == 1 and math.gcd(W * c0 + b - 1, sQ) == 1
    )
    return ResidueSetQ(Q, W, b, members)


def q_cardinality_formula(Q: int, W: int) -> int:
    """Q * prod over p | Q, p not dividing W, of (1 - 1/p) or (1 - 2/p) by p mod 4."""
    num, den = Q, 1
    for p, _ in factorize(Q).factors:
        if W % p == 0:
            continue
        k = 2 if (p % 4 == 3 and p != 3) else 1
        num *= p - k
        den *= p
    assert num % den == 0
    return num // den


@dataclass
class ExpSumReport:
    max_ratio: float
    argmax: tuple[int, int] | None
    bound: float
    holds: bool
    per_q: dict[int, float]


def check_expsum_bound(QS: ResidueSetQ, w: int) -> ExpSumReport:
    """max over q | Q, q > 1, (a, q) = 1 of |sum_{c in Q} e(a c / q)| / |Q|."""
    bound = w**-0.5
    size = len(QS)
    mem = np.array(QS.members, dtype=np.int64)
    per_q: dict[int, float] = {}
    best, arg = 0.0, None
    divisors = [d for d in range(2, QS.Q + 1) if QS.Q % d == 0]
    for q in divisors:
        hist = np.bincount(mem % q, minlength=q).astype(float)
        # sum_c e(a c / q) for every a at once
        sums = np.fft.ifft(hist) * q
        a = np.arange(q)
        units = np.array([math.gcd(int(x), q) == 1 for x in a])
        mags = np.abs(sums[units]) / size
        k = int(np.argmax(mags))
        per_q[q] = float(mags[k])
        if mags[k] > best:
            best, arg = float(mags[k]), (int(a[units][k]), q)
    return ExpSumReport(best, arg, bound, best <= bound, per_q)


def expsum_direct(QS: ResidueSetQ, a: int, q: int) -> complex:
    """Direct complex summation; oracle for check_expsum_bound."""
    return sum(cmath.exp(2j * math.pi * a * c / q) for c in QS.members)
