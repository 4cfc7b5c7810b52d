"""Exact arithmetic helpers: divisors, Moebius, totient, Ramanujan sums
and cyclotomic polynomials.

Everything is computed with plain Python integers; factorisation is by
trial division, which is ample for the group orders this package handles.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd

from .polynomial import IntPolynomial


def _check_positive(m: int, name: str = "n") -> None:
    if not isinstance(m, int) or isinstance(m, bool):
        raise TypeError(f"{name} must be an int, got {type(m).__name__}")
    if m < 1:
        raise ValueError(f"{name} must be a positive integer, got {m}")


@lru_cache(maxsize=4096)
def factorize(m: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of ``m`` as ((p, e), ...) with p increasing."""
    _check_positive(m, "m")
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    f = factorize(m)
    return len(f) == 1 and f[0][1] == 1


def prime_power(n: int) -> tuple[int, int] | None:
    """Return (p, k) when n = p**k with k >= 1, else None."""
    if n < 2:
        return None
    f = factorize(n)
    if len(f) != 1:
        return None
    return f[0]


@lru_cache(maxsize=4096)
def divisors(n: int) -> tuple[int, ...]:
    """All positive divisors of n in increasing order."""
    _check_positive(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])


def moebius(m: int) -> int:
    _check_positive(m, "m")
    f = factorize(m)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(m: int) -> int:
    _check_positive(m, "m")
    out = m
    for p, _ in factorize(m):
        out = out // p * (p - 1)
    return out


def ramanujan_sum(n: int, d: int) -> int:
    """C_n(d): the sum of zeta_n^(v*d) over units v, via its divisor sum.

    ``d`` is any residue; d = 0 is the class of n.
    """
    _check_positive(n)
    g0 = gcd(d % n, n)
    return sum(moebius(n // g) * g for g in divisors(g0))


def ramanujan_sum_class(n: int, d: int, e: int) -> int:
    """C_n(d, e): the sum of zeta_n^(d*v) over v with gcd(v, n) = e."""
    _check_positive(n)
    if d < 1 or n % d:
        raise ValueError(f"d={d} is not a divisor of n={n}")
    if e < 1 or n % e:
        raise ValueError(f"e={e} is not a divisor of n={n}")
    m = n // e
    if d % m == 0:
        return euler_phi(m)
    if d == 1:
        return moebius(m)
    return sum(moebius(m // g) * g for g in divisors(gcd(d, m)))


@lru_cache(maxsize=512)
def cyclotomic_poly(n: int) -> IntPolynomial:
    """The n-th cyclotomic polynomial, by exact division of x^n - 1."""
    _check_positive(n)
    num = IntPolynomial.monomial(n) - IntPolynomial([1])
    for d in divisors(n)[:-1]:
        q, r = num.divmod_monic(cyclotomic_poly(d))
        assert r.is_zero()
        num = q
    return num
