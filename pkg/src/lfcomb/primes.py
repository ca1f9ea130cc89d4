"""Prime enumeration and rigorous prime-sum tail bounds.

Primes are produced by a segmented Eratosthenes sieve so that ranges up to
1e8 can be streamed block by block without materializing everything at once.
Tail bounds use the Rosser-Schoenfeld inequality pi(x) < 1.25506 x/log x
(valid for x > 1), which keeps every bound explicit and one-sided.
"""

from __future__ import annotations

import math

import numpy as np

_RS_CONST = 1.25506  # pi(x) < _RS_CONST * x / log x for all x > 1

_SMALL_LIMIT = 1 << 16
_small_sieve = None


def _small_primes():
    global _small_sieve
    if _small_sieve is None:
        _small_sieve = primes_upto(_SMALL_LIMIT)
    return _small_sieve


def primes_upto(n):
    """All primes <= n as an int64 array (plain vectorized sieve)."""
    n = int(n)
    if n < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(math.isqrt(n)) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def prime_blocks(lo, hi, block=2_000_000):
    """Yield int64 arrays of the primes in (lo, hi], one block at a time.

    Segmented sieve: only odd candidates are stored per block, so memory is
    O(block) regardless of hi.
    """
    lo = int(math.floor(lo))
    hi = int(hi)
    if hi <= lo:
        return
    base = _small_primes() if hi > _SMALL_LIMIT else primes_upto(int(math.isqrt(hi)))
    if hi > _SMALL_LIMIT * _SMALL_LIMIT:
        base = primes_upto(int(math.isqrt(hi)))
    start = lo + 1
    while start <= hi:
        stop = min(start + block - 1, hi)
        seg = np.ones(stop - start + 1, dtype=bool)
        if start <= 1:
            seg[: max(0, 2 - start)] = False
        for p in base:
            p = int(p)
            if p * p > stop:
                break
            first = max(p * p, ((start + p - 1) // p) * p)
            seg[first - start :: p] = False
            if start <= p <= stop:
                seg[p - start] = True
        yield (np.flatnonzero(seg) + start).astype(np.int64)
        start = stop + 1


def prime_range(lo, hi):
    """Primes in (lo, hi] as one array (use prime_blocks for huge ranges)."""
    parts = list(prime_blocks(lo, hi))
    if not parts:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(parts)


def is_prime(n):
    n = int(n)
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for p in range(3, int(math.isqrt(n)) + 1, 2):
        if n % p == 0:
            return False
    return True


def next_prime_in_progression(residue, modulus, avoid=()):
    """Smallest prime p = residue (mod modulus) not dividing any of `avoid`.

    Exists by Dirichlet whenever gcd(residue, modulus) = 1; modulus 1 accepts
    every prime.
    """
    residue = int(residue) % max(int(modulus), 1)
    modulus = int(modulus)
    avoid = [int(a) for a in avoid if int(a) > 1]
    p = 2
    while True:
        if (modulus <= 1 or p % modulus == residue) and all(a % p for a in avoid):
            return p
        p += 1
        while not is_prime(p):
            p += 1


def prime_power_sum_tail(P, sigma):
    """Rigorous upper bound for sum_{p > P} p^(-sigma), sigma > 1.

    Partial summation against pi(x) < c x/log x gives
      sum_{p>P} p^(-sigma) <= c [ P^(1-sigma)/log P + sigma I ],
    I = int_P^inf x^(-sigma)/log x dx <= P^(1-sigma)/((sigma-1) log P).
    """
    P = float(P)
    sigma = float(sigma)
    if sigma <= 1.0:
        raise ValueError("tail bound requires sigma > 1")
    if P < 2.0:
        P = 2.0
    lp = math.log(P)
    main = P ** (1.0 - sigma) / lp
    integral = P ** (1.0 - sigma) / ((sigma - 1.0) * lp)
    return _RS_CONST * (main + sigma * integral)


def zeta_upper_bound(sigma, terms=64):
    """Certified upper bound for zeta(sigma), sigma > 1.

    Partial sum plus the integral-comparison tail N^(1-sigma)/(sigma-1).
    """
    sigma = float(sigma)
    if sigma <= 1.0:
        raise ValueError("zeta bound requires sigma > 1")
    n = np.arange(1, terms + 1, dtype=np.float64)
    partial = float(np.sum(n ** (-sigma)))
    tail = terms ** (1.0 - sigma) / (sigma - 1.0)
    return partial + tail
