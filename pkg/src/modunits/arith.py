"""Elementary number theory on Python integers.

Everything here is exact and works for arbitrarily large integers, but the
factorization routine is plain trial division and is meant for the small
levels this package deals with (N up to about 10**6).
"""

from functools import lru_cache
from math import gcd, isqrt


def xgcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g.

    >>> xgcd(240, 46)
    (2, -9, 47)
    """
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def inverse_mod(a, m):
    g, x, _ = xgcd(a, m)
    if g != 1:
        raise ValueError(f"{a} is not invertible modulo {m}")
    return x % m


def lcm(a, b):
    if a == 0 or b == 0:
        return 0
    return abs(a * b) // gcd(a, b)


def _primes_upto(bound):
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(range(p * p, bound + 1, p)))
    return [p for p in range(bound + 1) if sieve[p]]


_SMALL_PRIMES = _primes_upto(1000)


@lru_cache(maxsize=4096)
def factor(n):
    """Factor n >= 1 by trial division; returns a tuple of (p, e) pairs.

    >>> factor(360)
    ((2, 3), (3, 2), (5, 1))
    """
    if n < 1:
        raise ValueError("factor() needs a positive integer")
    out = []
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    else:
        p = _SMALL_PRIMES[-1] + 2
        while p * p <= n:
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
            p += 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_divisors(n):
    return [p for p, _ in factor(n)]


@lru_cache(maxsize=4096)
def divisors(n):
    """Sorted tuple of the positive divisors of n."""
    divs = [1]
    for p, e in factor(n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return tuple(sorted(divs))


def euler_phi(n):
    result = n
    for p, _ in factor(n):
        result = result // p * (p - 1)
    return result


def moebius(n):
    f = factor(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def omega(n):
    """Number of distinct prime factors."""
    return len(factor(n))


def is_squarefree(n):
    return all(e == 1 for _, e in factor(n))


def valuation(n, p):
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def ord2(n):
    return valuation(n, 2)


def square_part(n):
    """Largest s with s*s dividing n."""
    s = 1
    for p, e in factor(n):
        s *= p ** (e // 2)
    return s


def psi(n):
    """Index of Gamma_0(n) in SL(2, Z): n * prod(1 + 1/p)."""
    result = n
    for p, _ in factor(n):
        result = result // p * (p + 1)
    return result


def jacobi(a, b):
    """Jacobi symbol (a|b) for odd b >= 1.

    >>> jacobi(2, 3), jacobi(2, 15), jacobi(1, 9)
    (-1, 1, 1)
    """
    if b <= 0 or b % 2 == 0:
        raise ValueError(f"Jacobi symbol needs an odd positive modulus, got {b}")
    a %= b
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                result = -result
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            result = -result
        a %= b
    return result if b == 1 else 0
