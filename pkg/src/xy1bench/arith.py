"""Primes, factorization and the quadratic-form membership predicates.

The sets handled here:

* P      primes p with p - 1 a sum of two squares
* P*     primes p with p - 1 a sum of two coprime squares
* S      integers a^2 + b^2 with gcd(a, b) free of primes other than 2, 3
* s(n)   product of the distinct primes p | n with p = 3 mod 4, p != 3
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

SPF_LIMIT = 10**7
_SEGMENT_ODDS = 1 << 22


class InvalidArgument(ValueError):
    pass


def _small_sieve(limit: int) -> np.ndarray:
    """Plain sieve of Eratosthenes; returns the primes <= limit."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    mark = np.ones(limit + 1, dtype=bool)
    mark[:2] = False
    mark[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if mark[p]:
            mark[p * p :: 2 * p] = False
    return np.flatnonzero(mark).astype(np.int64)


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError("factors must be increasing with positive exponents")
            prod *= p**e
            last = p
        if prod != self.n:
            raise ValueError(f"factors multiply to {prod}, not {self.n}")

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def valuation(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0


@dataclass
class PrimeTable:
    """Primality over [2, limit], stored as a packed odd-only bitset.

    Bit i of `bits` (big-endian within each byte, numpy's packbits order)
    says whether 2i + 1 is prime.
    """

    limit: int
    bits: np.ndarray
    _primes: np.ndarray | None = field(default=None, repr=False)
    _masks: dict = field(default_factory=dict, repr=False)

    def is_prime(self, n: int) -> bool:
        if n < 2 or n > self.limit:
            if n > self.limit:
                raise InvalidArgument(f"{n} beyond table limit {self.limit}")
            return False
        if n == 2:
            return True
        if n % 2 == 0:
            return False
        i = n >> 1
        return bool((self.bits[i >> 3] >> (7 - (i & 7))) & 1)

    def primes(self) -> np.ndarray:
        if self._primes is None:
            odd = np.unpackbits(self.bits, count=(self.limit + 1) // 2)
            ps = 2 * np.flatnonzero(odd).astype(np.int64) + 1
            self._primes = np.concatenate(([2], ps)) if self.limit >= 2 else ps
        return self._primes

    def count(self) -> int:
        return int(self.primes().size)

    def is_prime_mask(self) -> np.ndarray:
        """Boolean array of length limit + 1."""
        mask = np.zeros(self.limit + 1, dtype=bool)
        mask[self.primes()] = True
        return mask

    def in_P_mask(self) -> np.ndarray:
        """Boolean array over primes(): p in P."""
        if "P" not in self._masks:
            ok, _ = _two_square_tables(self.limit)
            self._masks["P"] = ok[self.primes() - 1]
        return self._masks["P"]

    def in_Pstar_mask(self) -> np.ndarray:
        """Boolean array over primes(): p in P*."""
        if "P*" not in self._masks:
            _, free = _two_square_tables(self.limit)
            ps = self.primes()
            m = ps - 1
            self._masks["P*"] = free[m] & (m % 4 != 0)
        return self._masks["P*"]

    def P_primes(self) -> np.ndarray:
        return self.primes()[self.in_P_mask()]

    def Pstar_primes(self) -> np.ndarray:
        return self.primes()[self.in_Pstar_mask()]


def sieve_primes(limit: int) -> PrimeTable:
    """Segmented odd-only sieve; the result is bit-packed."""
    if limit < 2:
        raise InvalidArgument("limit must be at least 2")
    if limit > 2**32:
        raise InvalidArgument("limit beyond 2^32")
    n_odd = (limit + 1) // 2  # odd numbers 1, 3, ..., <= limit
    base = _small_sieve(math.isqrt(limit))[1:]
    chunks = []
    for lo in range(0, n_odd, _SEGMENT_ODDS):
        hi = min(lo + _SEGMENT_ODDS, n_odd)
        seg = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            sq = p * p
            if sq >= 2 * hi + 1:
                break
            # first odd multiple >= max(p^2, 2lo+1), as an odd index
            start = max(sq, ((2 * lo + 1 + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            seg[(start >> 1) - lo :: p] = False
        if lo == 0:
            seg[0] = False  # 1 is not prime
        chunks.append(seg)
    odd = np.concatenate(chunks)
    return PrimeTable(limit=limit, bits=np.packbits(odd))


@lru_cache(maxsize=4)
def _two_square_tables(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """For every m <= limit: (m is a sum of two squares, no prime = 3 mod 4 divides m).

    Uses the identity [v_p(m) odd] = sum_k (-1)^(k+1) [p^k | m] to count the
    primes = 3 mod 4 dividing m to an odd power.
    """
    odd_cnt = np.zeros(limit + 1, dtype=np.int32)
    any_cnt = np.zeros(limit + 1, dtype=bool)
    for p in _small_sieve(limit):
        p = int(p)
        if p % 4 != 3:
            continue
        any_cnt[p::p] = True
        pk, sign = p, 1
        while pk <= limit:
            odd_cnt[pk::pk] += sign
            sign = -sign
            pk *= p
    ok = odd_cnt == 0
    return ok, ~any_cnt


@lru_cache(maxsize=1)
def _spf_table() -> np.ndarray:
    spf = np.zeros(SPF_LIMIT + 1, dtype=np.int32)
    for p in _small_sieve(math.isqrt(SPF_LIMIT)):
        p = int(p)
        view = spf[p * p :: p]
        view[view == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    return spf


@lru_cache(maxsize=1)
def _trial_primes() -> np.ndarray:
    return _small_sieve(1 << 16)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)   # deterministic below 3.3e24


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with fixed bases; exact for n < 2^64."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """A nontrivial factor of the odd composite n."""
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        f = lambda v: (v * v + c) % n
        while g == 1:
            x = y
            for _ in range(r):
                y = f(y)
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = f(y)
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = f(ys)
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"no factor found for {n}")


def _split_large(m: int, out: dict) -> None:
    if m == 1:
        return
    if is_probable_prime(m):
        out[m] = out.get(m, 0) + 1
        return
    d = _pollard_brent(m)
    _split_large(d, out)
    _split_large(m // d, out)


def factorize(n: int) -> Factorization:
    if n < 1 or n >= 2**63:
        raise InvalidArgument("n must lie in [1, 2^63)")
    out: list[tuple[int, int]] = []
    if n <= SPF_LIMIT:
        spf = _spf_table()
        m = n
        while m > 1:
            p = int(spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        return Factorization(n, tuple(out))
    m = n
    for p in _trial_primes():
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    # what is left has no prime factor below 2^16; split it with Pollard-Brent
    big: dict[int, int] = {}
    _split_large(m, big)
    out.extend(sorted(big.items()))
    return Factorization(n, tuple(out))


def s_of(n: int) -> int:
    s = 1
    for p, _ in factorize(n).factors:
        if p % 4 == 3 and p != 3:
            s *= p
    return s


def is_sum_two_squares(n: int) -> bool:
    if n == 0:
        return True
    return all(e % 2 == 0 for p, e in factorize(n).factors if p % 4 == 3)


def in_S(n: int) -> bool:
    if n < 1:
        raise InvalidArgument("n must be positive")
    for p, e in factorize(n).factors:
        if p == 3 and e % 2:
            return False
        if p > 3 and p % 4 == 3:
            return False
    return True


def _is_prime_small(p: int) -> bool:
    if p < 2:
        return False
    if p <= SPF_LIMIT:
        return int(_spf_table()[p]) == p
    return is_probable_prime(p)


def in_P(p: int) -> bool:
    if not _is_prime_small(p):
        raise InvalidArgument(f"{p} is not prime")
    return is_sum_two_squares(p - 1)


def in_Pstar(p: int) -> bool:
    if not _is_prime_small(p):
        raise InvalidArgument(f"{p} is not prime")
    if p == 2:
        return True
    m = p - 1
    if m % 4 == 0:
        return False
    return all(q % 4 != 3 for q, _ in factorize(m).factors)


def mobius(n: int) -> int:
    f = factorize(n).factors
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def mangoldt_table(lo: int, hi: int) -> np.ndarray:
    """Lambda(n) for lo <= n < hi (natural log), via the smallest-prime-factor table."""
    if hi - 1 > SPF_LIMIT:
        raise InvalidArgument("range exceeds the factor table")
    spf = _spf_table()
    n = np.arange(lo, hi, dtype=np.int64)
    p = spf[lo:hi].astype(np.int64)
    out = np.zeros(hi - lo)
    valid = n >= 2
    m = np.where(valid, n, 1)
    pv = np.where(valid, p, 2)
    while True:
        divisible = (m % pv == 0) & (m > 1)
        if not divisible.any():
            break
        m = np.where(divisible, m // pv, m)
    ppow = valid & (m == 1)
    # plain math.log so that scalar code reproduces the values bit for bit
    idx = np.flatnonzero(ppow)
    out[idx] = [math.log(int(q)) for q in pv[idx]]
    return out
