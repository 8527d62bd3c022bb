"""Integer primality, factorization, and p-adic valuations for the sweep tooling."""

from __future__ import annotations

import math

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
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


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(math.isqrt(n)) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, f in enumerate(sieve) if f]


def valuation(n: int, p: int) -> int:
    """Largest v with p^v | n, for n != 0."""
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def trial_division(n: int, bound: int) -> tuple[dict[int, int], int]:
    """Factor out all primes <= bound; returns ({p: multiplicity}, cofactor >= 1)."""
    n = abs(n)
    factors: dict[int, int] = {}
    for p in primes_up_to(bound):
        if p * p > n:
            break
        if n % p == 0:
            v = valuation(n, p)
            factors[p] = v
            n //= p**v
    if 1 < n <= bound:
        factors[n] = factors.get(n, 0) + 1
        n = 1
    return factors, n


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in range(1, 50):
        x, y, d = 2, 2, 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed on {n}")


def factorize(n: int) -> dict[int, int]:
    """Full factorization of |n| via trial division plus Pollard rho."""
    n = abs(n)
    if n <= 1:
        return {}
    factors, cofactor = trial_division(n, 10_000)
    stack = [cofactor] if cofactor > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return dict(sorted(factors.items()))
