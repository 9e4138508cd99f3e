"""Integer arithmetic helpers: primes, primality, square-free parts, symbols."""

from __future__ import annotations

import random
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from . import _kernels

TRIAL_BOUND = 10**6

# Miller-Rabin with the first 13 primes as bases is exact below this value
MR_DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
PROBABLE_ROUNDS = 40


class IndeterminateSquarefree(ArithmeticError):
    """Trial division left a composite remainder whose square part is unknown."""

    def __init__(self, n: int, remainder: int):
        super().__init__(f"indeterminate square-free part: {n} leaves cofactor {remainder}")
        self.n = n
        self.remainder = remainder


@lru_cache(maxsize=8)
def primes_up_to(n: int) -> np.ndarray:
    """Sorted int64 array of primes <= n (sieve of Eratosthenes)."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=np.bool_)
    sieve[:2] = False
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    out = np.flatnonzero(sieve).astype(np.int64)
    out.flags.writeable = False
    return out


def primality(n: int) -> str:
    """``"prime"``, ``"probable"`` or ``"composite"``.

    Exact below ``MR_DETERMINISTIC_LIMIT``; above it, 40 strong-probable-prime
    rounds with seeded random bases.
    """
    if n < 2:
        return "composite"
    for p in _MR_BASES:
        if n % p == 0:
            return "prime" if n == p else "composite"
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < MR_DETERMINISTIC_LIMIT:
        bases = _MR_BASES
        verdict = "prime"
    else:
        rng = random.Random(n)
        bases = [rng.randrange(2, n - 1) for _ in range(PROBABLE_ROUNDS)]
        verdict = "probable"
    for a in bases:
        if not _strong_probable_prime(n, a, d, s):
            return "composite"
    return verdict


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    return primality(n) != "composite"


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``n >= 1`` by trial division (small inputs only)."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def squarefree_part(n: int, bound: int = TRIAL_BOUND) -> tuple[int, int]:
    """``(D, m)`` with ``D`` square-free and ``D * m**2 == n``.

    Primes up to ``bound`` are removed by trial division. The remainder is
    then settled without factoring it: 1, a prime, or a perfect square are
    immediate; below ``bound**2`` it must be prime; below ``bound**3`` a
    non-square composite is a product of two distinct primes. Anything else
    raises :class:`IndeterminateSquarefree`.
    """
    if n < 1:
        raise ValueError("squarefree_part needs n >= 1")
    primes = primes_up_to(bound)
    if n < _kernels.INT64_SAFE:
        sqf, sq, rem, _ = _kernels.strip_small_primes(n, primes)
    else:
        sqf, sq, rem = _strip_big(n, primes)
    if rem == 1:
        return sqf, sq
    root = isqrt(rem)
    if root * root == rem:
        return sqf, sq * root
    if rem < bound * bound or is_prime(rem):
        return sqf * rem, sq
    if rem < bound**3:
        return sqf * rem, sq
    raise IndeterminateSquarefree(n, rem)


def _mod_small(n: int, primes: np.ndarray) -> np.ndarray:
    """``n mod p`` for every ``p`` in ``primes`` (all below 2**31), n >= 0."""
    limbs = []
    while n:
        limbs.append(n & 0x7FFFFFFF)
        n >>= 31
    ps = primes.astype(np.int64)
    acc = np.zeros_like(ps)
    for limb in reversed(limbs):
        acc = (acc * (1 << 31) + limb) % ps
    return acc


def _strip_big(n: int, primes: np.ndarray) -> tuple[int, int, int]:
    sqf, sq, rem = 1, 1, n
    divisors = primes[_mod_small(n, primes) == 0]
    for p in divisors.tolist():
        if p * p > rem:
            break
        e = 0
        while rem % p == 0:
            rem //= p
            e += 1
        if e % 2:
            sqf *= p
        sq *= p ** (e // 2)
    return sqf, sq, rem


def is_squarefree(n: int) -> bool:
    """Exact; raises :class:`IndeterminateSquarefree` when ``n`` is too large to settle."""
    return n >= 1 and squarefree_part(n)[1] == 1


def squarefree_kernel(n: int) -> int:
    """Signed square-free part: ``n == sign * s * m**2`` with ``s`` returned signed."""
    if n == 0:
        raise ValueError("zero has no square-free part")
    s = 1
    for p, e in factorize(abs(n)).items():
        if e % 2:
            s *= p
    return s if n > 0 else -s


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive ``n``."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("Jacobi symbol needs an odd positive modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a: int, p: int) -> int:
    return jacobi(a, p)


def euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def count_roots_mod_p(c2: int, c1: int, c0: int, p: int) -> int:
    """Number of roots of ``c2*x^2 + c1*x + c0`` in Z/p, for a prime ``p``.

    Constant zero polynomials have ``p`` roots.
    """
    c2, c1, c0 = c2 % p, c1 % p, c0 % p
    if c2 == 0:
        if c1 == 0:
            return p if c0 == 0 else 0
        return 1
    if p == 2:
        return sum((c2 * x * x + c1 * x + c0) % 2 == 0 for x in range(2))
    return 1 + legendre(c1 * c1 - 4 * c2 * c0, p)


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b
