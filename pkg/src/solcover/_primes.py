"""Trial-division factorization helpers.

All inputs in this package are either bonding degrees (64-bit bounded) or
cycle lengths / user fractions (small), so plain trial division is enough
and keeps the arithmetic fully deterministic.
"""

from __future__ import annotations


def factorize(n: int) -> dict[int, int]:
    """Return the prime factorization of ``n >= 1`` as {prime: exponent}."""
    if n < 1:
        raise ValueError(f"cannot factor {n}: need a positive integer")
    factors: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    # Remaining factors via the 6k +/- 1 wheel.
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                factors[p] = factors.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def is_prime(n: int) -> bool:
    """Deterministic primality test by trial division."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    d = 5
    while d * d <= n:
        if n % d == 0 or n % (d + 2) == 0:
            return False
        d += 6
    return True


def valuation(n: int, p: int) -> int:
    """Largest e with p**e dividing n (n != 0)."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    n = abs(n)
    e = 0
    while n % p == 0:
        e += 1
        n //= p
    return e
