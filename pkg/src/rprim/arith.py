"""Exact integer number theory used throughout the package.

Factorization is trial division by the primes below 10**6 followed by
Pollard rho (Brent's variant) on whatever cofactor remains.  Primality is a
deterministic Miller-Rabin test, valid for every input below 2**64.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

MAX_INPUT = 1 << 63
TRIAL_LIMIT = 10**6

# Deterministic witness set for n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for prime, e in self.factors:
            if prime == p:
                return e
        return 0

    def radical(self) -> int:
        return math.prod(self.primes)

    def divisors(self) -> list[int]:
        out = [1]
        for p, e in self.factors:
            out = [d * p**i for d in out for i in range(e + 1)]
        return sorted(out)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)


def _check_range(m: int) -> None:
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool):
        raise TypeError(f"expected an integer, got {type(m).__name__}")
    if m < 1 or m >= MAX_INPUT:
        raise ValueError(f"input {m} outside [1, 2**63)")


@functools.lru_cache(maxsize=None)
def primes_up_to(limit: int) -> np.ndarray:
    """Sieve of Eratosthenes; returns an int64 array of primes <= limit."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.flatnonzero(sieve).astype(np.int64)


def is_prime(m: int) -> bool:
    m = int(m)
    if m < 2:
        return False
    for p in _MR_BASES:
        if m % p == 0:
            return m == p
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, m)
        if x == 1 or x == m - 1:
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def _brent(n: int, rng: random.Random) -> int:
    """Return a nontrivial factor of the odd composite n."""
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict[int, int], rng: random.Random) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    root = math.isqrt(n)
    if root * root == n:
        _split(root, out, rng)
        _split(root, out, rng)
        return
    d = _brent(n, rng)
    _split(d, out, rng)
    _split(n // d, out, rng)


@functools.lru_cache(maxsize=1 << 16)
def factor(m: int) -> Factorization:
    _check_range(m)
    m = int(m)
    found: dict[int, int] = {}
    rest = m
    if rest > 1:
        primes = primes_up_to(TRIAL_LIMIT)
        bound = min(math.isqrt(rest), TRIAL_LIMIT)
        small = primes[: np.searchsorted(primes, bound, side="right")]
        hits = small[np.asarray(rest % small) == 0] if len(small) else small
        for p in hits.tolist():
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            found[p] = e
    if rest > 1:
        # Seeded so repeated runs take identical paths.
        _split(rest, found, random.Random(rest))
    return Factorization(m, tuple(sorted(found.items())))


def mobius(m: int) -> int:
    fac = factor(m)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac.factors) % 2 else 1


def euler_phi(m: int) -> int:
    out = int(m)
    for p, _ in factor(m):
        out = out // p * (p - 1)
    return out


def divisor_count(m: int) -> int:
    return math.prod(e + 1 for _, e in factor(m))


def divisors(m: int) -> list[int]:
    return factor(m).divisors()


def phi_ratio(m: int) -> Fraction:
    """phi(m)/m, exactly."""
    return Fraction(euler_phi(m), m)


def prime_power(q: int) -> tuple[int, int] | None:
    """(p, k) with q == p**k, or None when q is not a prime power."""
    if q < 2:
        return None
    fac = factor(q)
    if len(fac.factors) != 1:
        return None
    return fac.factors[0]


def prime_powers_in(lo: int, hi: int) -> list[tuple[int, int, int]]:
    """All prime powers q with lo <= q <= hi as (p, k, q), ascending in q."""
    if lo < 1 or hi < lo:
        raise ValueError(f"need 1 <= lo <= hi, got lo={lo}, hi={hi}")
    out = []
    for p in primes_up_to(hi).tolist():
        q, k = p, 1
        while q <= hi:
            if q >= lo:
                out.append((p, k, q))
            q *= p
            k += 1
    out.sort(key=lambda t: t[2])
    return out
