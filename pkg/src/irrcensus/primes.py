"""Prime generation and basic modular helpers."""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np

from .errors import DomainError


def simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def primes_up_to(limit: int, segment_size: int = 1 << 20) -> Iterator[int]:
    """Stream primes <= limit with a segmented sieve (memory stays O(segment))."""
    if limit < 2:
        return
    base = simple_sieve(math.isqrt(limit))
    for p in base.tolist():
        yield p
    low = math.isqrt(limit) + 1
    base_list = base.tolist()
    while low <= limit:
        high = min(low + segment_size - 1, limit)
        mask = np.ones(high - low + 1, dtype=bool)
        for p in base_list:
            start = max(p * p, ((low + p - 1) // p) * p)
            if start > high:
                continue
            mask[start - low :: p] = False
        for q in (np.flatnonzero(mask) + low).tolist():
            yield q
        low = high + 1


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def kronecker_prime(disc: int, p: int) -> int:
    """Kronecker symbol (disc / p) for prime p."""
    if p == 2:
        if disc % 2 == 0:
            return 0
        return 1 if disc % 8 in (1, 7) else -1
    r = disc % p
    if r == 0:
        return 0
    ls = pow(r, (p - 1) // 2, p)
    return 1 if ls == 1 else -1


def sqrt_mod_prime(a: int, p: int) -> int:
    """A square root of a modulo the odd prime p (Tonelli-Shanks).

    Requires a to be a quadratic residue; raises DomainError otherwise.
    """
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        raise DomainError(f"{a} is not a quadratic residue mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p - 1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2 = t
        i = 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t = t * c % p
        r = r * b % p
    return r
