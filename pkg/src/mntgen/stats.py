"""Local densities and empirical counts for curve families.

With ``Delta(x) = (w0*x + w1)^2 + w2 = u*(4q(x) - t(x)^2)`` a seed ``x``
gives a curve with CM discriminant ``D`` when ``q(x)``, ``r(x)`` are prime
and ``Delta(x) = u*D*m^2``. The local factors below count residues that
obstruct or allow this, and the Euler products combine them into the
constant of the expected growth ``E(z) ~ S0 * sqrt(z) / log z``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from math import gcd

import numpy as np

from . import _kernels
from .arith import (
    IndeterminateSquarefree,
    count_roots_mod_p,
    euler_phi,
    factorize,
    jacobi,
    primes_up_to,
    squarefree_kernel,
)
from .families import Family
from .intpoly import QuadPoly, is_square, resultant
from .pell import reduce
from .search import CurveInstance, _instance_at

log = logging.getLogger(__name__)

DECIMAL_PREC = 80
OUTPUT_DIGITS = 50


def delta_poly(fam: Family) -> QuadPoly:
    inst = reduce(fam)
    w0, w1, w2 = inst.w0, inst.w1, inst.w2
    return QuadPoly(w0 * w0, 2 * w0 * w1, w1 * w1 + w2)


def _desc(p: QuadPoly) -> tuple[int, int, int]:
    return (p.c2, p.c1, p.c0)


def c_p(fam: Family, p: int) -> int:
    """#{n mod p^2 : p | q(n), or p | r(n), or p^2 | Delta(n)}, by enumeration.

    Moduli too large for the residue kernels fall back to the per-residue
    lifting count, which is exact for every ``p``.
    """
    if not _kernels.residue_count_fits(p * p):
        return c_p_lifting(fam, p)
    return _kernels.cp_count(_desc(fam.q), _desc(fam.r), _desc(delta_poly(fam)), p)


def c_p_lifting(fam: Family, p: int) -> int:
    """Same count as :func:`c_p`, by lifting each residue mod ``p`` to ``p^2``."""
    unit, lifts = _residue_lifts(fam, p)
    # residues where q or r vanishes mod p contribute all p lifts
    return int(p * np.count_nonzero(~unit) + lifts[unit].sum())


def rho_fn(fam: Family, m: int) -> int:
    """#{beta mod m^2 : m^2 | Delta(beta), and q(beta)r(beta) is a unit mod every p | m}.

    Enumerated directly while ``m^2`` is small; prime powers beyond that are
    counted by lifting roots of ``Delta`` one power of ``p`` at a time.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return 1
    fac = factorize(m)
    if _kernels.residue_count_fits(m * m):
        return _kernels.rho_count(_desc(fam.q), _desc(fam.r), _desc(delta_poly(fam)), m, sorted(fac))
    if len(fac) == 1:
        (p, e), = fac.items()
        return rho_prime_power(fam, p, e)
    raise ValueError(f"modulus {m} too large for enumeration")


def rho_prime_lifting(fam: Family, p: int) -> int:
    """``rho(p)`` for a prime ``p`` by lifting residues mod ``p``."""
    unit, lifts = _residue_lifts(fam, p)
    return int(lifts[unit].sum())


def rho_prime_power(fam: Family, p: int, e: int) -> int:
    """``rho(p^e)``: roots of ``Delta`` mod ``p^(2e)`` built up one power of ``p`` at a time.

    Every root mod ``p^(j+1)`` reduces to a root mod ``p^j``, so extending
    each root by the ``p`` candidate digits finds them all.
    """
    delta = delta_poly(fam)
    roots = [b for b in range(p) if delta(b) % p == 0 and fam.q(b) % p and fam.r(b) % p]
    mod = p
    for _ in range(2 * e - 1):
        nxt = mod * p
        roots = [b + mod * j for b in roots for j in range(p) if delta(b + mod * j) % nxt == 0]
        mod = nxt
    return len(roots)


def _residue_lifts(fam: Family, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Per residue ``beta mod p``: whether ``q(beta)r(beta)`` is a unit, and
    #{j mod p : p^2 | Delta(beta + p*j)}.

    ``Delta(beta + p*j) = Delta(beta) + p*j*Delta'(beta) (mod p^2)``, so a
    residue with ``p | Delta(beta)`` lifts once when ``p`` does not divide
    ``Delta'(beta)``, and ``p`` times or never otherwise.
    """
    delta = delta_poly(fam)
    if p**4 >= _kernels.INT64_SAFE:
        return _residue_lifts_py(fam, delta, p)
    p2 = p * p
    beta = np.arange(p, dtype=np.int64)

    def ev(poly, mod):
        c2, c1, c0 = poly.c2 % mod, poly.c1 % mod, poly.c0 % mod
        return ((c2 * beta % mod) * beta + c1 * beta + c0) % mod

    unit = (ev(fam.q, p) != 0) & (ev(fam.r, p) != 0)
    dval = ev(delta, p2)
    dprime = (2 * (delta.c2 % p) * beta + delta.c1 % p) % p
    lifts = np.zeros(p, dtype=np.int64)
    root = dval % p == 0
    lifts[root & (dprime != 0)] = 1
    lifts[root & (dprime == 0) & (dval == 0)] = p
    return unit, lifts


def _residue_lifts_py(fam: Family, delta: QuadPoly, p: int):
    d1 = delta.derivative()
    unit = np.zeros(p, dtype=np.bool_)
    lifts = np.zeros(p, dtype=np.int64)
    for beta in range(p):
        unit[beta] = bool(fam.q(beta) % p and fam.r(beta) % p)
        val = delta(beta)
        if val % p == 0:
            if d1(beta) % p:
                lifts[beta] = 1
            elif val % (p * p) == 0:
                lifts[beta] = p
    return unit, lifts


def exceptional_modulus(fam: Family) -> int:
    """Product whose prime divisors need exact local counts.

    Away from these primes the roots of ``q``, ``r`` and ``Delta`` mod ``p``
    are distinct and those of ``Delta`` are simple, so local counts follow
    from Legendre symbols.
    """
    inst = reduce(fam)
    delta = delta_poly(fam)
    parts = [
        2,
        inst.u,
        inst.w0,
        inst.w2,
        fam.h,
        fam.d,
        resultant(fam.q, fam.r),
        resultant(fam.q, delta),
        resultant(fam.r, delta),
    ]
    if any(v == 0 for v in parts):
        raise ValueError("degenerate family: vanishing resultant or Pell coefficient")
    out = 1
    for v in parts:
        out *= abs(v)
    return out


def is_exceptional(fam: Family, p: int, modulus: int | None = None) -> bool:
    modulus = exceptional_modulus(fam) if modulus is None else modulus
    return modulus % p == 0


def _generic_local(fam: Family, w2: int, p: int) -> tuple[int, int]:
    """``(C_p, rho(p))`` for a non-exceptional prime from root counts."""
    roots_q = count_roots_mod_p(fam.q.c2, fam.q.c1, fam.q.c0, p)
    roots_r = count_roots_mod_p(fam.r.c2, fam.r.c1, fam.r.c0, p)
    rho = 1 + jacobi(-w2, p)
    return p * (roots_q + roots_r) + rho, rho


def local_factors(fam: Family, p: int, modulus: int | None = None) -> tuple[int, int]:
    """``(C_p, rho(p))``: exact counts at exceptional primes, root counts elsewhere."""
    if is_exceptional(fam, p, modulus):
        if _kernels.residue_count_fits(p * p):
            return c_p(fam, p), rho_fn(fam, p)
        return c_p_lifting(fam, p), rho_prime_lifting(fam, p)
    return _generic_local(fam, reduce(fam).w2, p)


def admissible_classes(fam: Family, *, check: bool = True) -> tuple[int, list[int]]:
    """Residues ``c mod 8*w2'`` of primes at which ``-w2`` is a square.

    ``w2'`` is the product of the odd primes in the square-free part of
    ``w2``. For primes in these classes ``rho(p) = 2``, for the others
    ``rho(p) = 0``, apart from finitely many exceptional primes.

    With ``check`` the class count is asserted to be ``2*phi(w2')``. That
    count fails exactly when ``-w2`` is a perfect square: then ``Delta``
    splits into linear factors and every class is admissible.
    """
    w2 = reduce(fam).w2
    if w2 == 0:
        raise ValueError("degenerate discriminant")
    s = squarefree_kernel(-w2)
    w2p = 1
    for p in factorize(abs(s)):
        if p != 2:
            w2p *= p
    modulus = 8 * w2p
    classes = [c for c in range(1, modulus, 2) if gcd(c, modulus) == 1 and jacobi(s, c) == 1]
    expected = 2 * euler_phi(w2p)
    if check and len(classes) != expected:
        raise AssertionError(f"admissible class count {len(classes)} != 2*phi(w2') = {expected}")
    return modulus, classes


def predicted_rho(modulus: int, classes: list[int], p: int) -> int:
    return 2 if p % modulus in classes else 0


@dataclass
class EulerConstants:
    S1: Decimal
    S2: Decimal
    S0: Decimal
    P: int
    S0_half: Decimal
    obstructed: bool = False
    obstruction_prime: int | None = None
    divergent: bool = False

    @property
    def delta(self) -> Decimal:
        """|S0(P) - S0(P/2)|."""
        return abs(self.S0 - self.S0_half)


def euler_constants(fam: Family, P: int) -> EulerConstants:
    """Partial Euler products over primes ``p <= P``.

    S1 = prod (1 - C_p/p^2) (1 - 1/p)^-2
    S2 = prod (1 - 1/p) (1 + f(p)/p),  f(p) = (1 - 1/p)^2 (1 - C_p/p^2)^-1 rho(p)
    S0 = sqrt(u) / (4|w0|) * S1 * S2

    Factors are exact rationals; products are carried in 80-digit decimals
    and rounded to 50 digits.
    """
    if P < 3:
        raise ValueError("P must be at least 3")
    inst = reduce(fam)
    modulus = exceptional_modulus(fam)
    divergent = is_square(-inst.w2)
    with localcontext() as ctx:
        ctx.prec = DECIMAL_PREC
        s1 = Decimal(1)
        s2 = Decimal(1)
        half = None
        scale = Decimal(inst.u).sqrt() / (4 * abs(inst.w0))
        obstructed_at = None
        for p in primes_up_to(P).tolist():
            if half is None and p > P // 2:
                half = scale * s1 * s2
            cp, rho = local_factors(fam, p, modulus)
            p2 = p * p
            if cp == p2:
                obstructed_at = p
                s1 = s2 = Decimal(0)
                break
            local = Decimal(p2 - cp) / p2
            s1 *= local * Decimal(p2) / Decimal((p - 1) ** 2)
            fp = Decimal((p - 1) ** 2) / p2 / local * rho
            s2 *= Decimal(p - 1) / p * (1 + fp / p)
        s0 = scale * s1 * s2
        if half is None:
            half = s0
        ctx.prec = OUTPUT_DIGITS
        return EulerConstants(
            +s1, +s2, +s0, P, +half,
            obstructed=obstructed_at is not None,
            obstruction_prime=obstructed_at,
            divergent=divergent,
        )


@dataclass
class CensusResult:
    count: int
    indeterminate: int
    instances: list[CurveInstance] = field(default_factory=list)

    def checkpoints(self, zs) -> list[tuple[int, int]]:
        """``(z, E(z))`` for each ``z`` from the instances already found."""
        ds = sorted(c.D for c in self.instances)
        return [(z, int(np.searchsorted(ds, z, side="right"))) for z in zs]


SIEVE_PRIME_BOUND = 1000


def candidate_seeds(fam: Family, x_min: int, x_max: int) -> list[int]:
    """Seeds where neither ``q(x)`` nor ``r(x)`` has a prime factor below the sieve bound.

    Seeds where one of the values is small enough to itself be such a
    prime are always kept.
    """
    count = x_max - x_min + 1
    if count <= 0:
        return []
    primes = primes_up_to(SIEVE_PRIME_BOUND)
    hit = _kernels.sieve_hits(_desc(fam.q), x_min, count, primes)
    hit |= _kernels.sieve_hits(_desc(fam.r), x_min, count, primes)
    near = _small_value_radius(fam, SIEVE_PRIME_BOUND)
    keep = []
    for i in np.flatnonzero(~hit).tolist():
        keep.append(x_min + i)
    for x in range(max(x_min, -near), min(x_max, near) + 1):
        if hit[x - x_min]:
            keep.append(x)
    return sorted(keep)


def _small_value_radius(fam: Family, bound: int) -> int:
    """``R`` with ``|q(x)|, |r(x)| > bound`` whenever ``|x| > R``."""
    radius = 0
    for p in (fam.q, fam.r):
        # |p(x)| >= x^2 - |c1||x| - |c0| once |c2| >= 1
        c1, c0 = abs(p.c1), abs(p.c0)
        x = c1 + 1
        while x * x - c1 * x - c0 <= bound:
            x += 1
        radius = max(radius, x)
    return radius


def census_detail(fam: Family, z: int, x_max: int, *, jobs: int = 1) -> CensusResult:
    """Curves ``(q, r, t)`` from seeds ``|x| <= x_max`` with ``D <= z``."""
    if z < 1:
        return CensusResult(0, 0)
    seeds = candidate_seeds(fam, -x_max, x_max)
    if jobs > 1 and len(seeds) > 1000:
        step = -(-len(seeds) // (jobs * 4))
        chunks = [(fam, seeds[i : i + step], z) for i in range(0, len(seeds), step)]
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_census_chunk, chunks))
    else:
        parts = [_census_chunk((fam, seeds, z))]
    seen: dict[tuple[int, int, int], CurveInstance] = {}
    indeterminate = 0
    for found, skips in parts:
        for x in skips:
            log.warning("x=%d skipped: indeterminate square-free part", x)
        indeterminate += len(skips)
        for inst in found:
            seen.setdefault(inst.key(), inst)
    found = sorted(seen.values(), key=lambda c: c.x)
    return CensusResult(len(found), indeterminate, found)


def _census_chunk(args):
    fam, seeds, z = args
    found, skips = [], []
    for x in seeds:
        try:
            inst = _instance_at(fam, x, 1, z)
        except IndeterminateSquarefree:
            skips.append(x)
            continue
        if inst is not None:
            found.append(inst)
    return found, skips


def census(fam: Family, z: int, x_max: int, *, jobs: int = 1) -> int:
    return census_detail(fam, z, x_max, jobs=jobs).count


@dataclass
class DensityProfile:
    family: Family
    delta: QuadPoly
    u: int
    w0: int
    w1: int
    w2: int
    C: dict[int, int]
    rho: dict[int, int]
    constants: EulerConstants
    admissible_modulus: int | None
    admissible: list[int] | None

    def to_dict(self) -> dict:
        c = self.constants
        return {
            "family": self.family.to_dict(),
            "delta": self.delta.coeffs(),
            "u": self.u,
            "w0": self.w0,
            "w1": self.w1,
            "w2": self.w2,
            "C": {str(p): v for p, v in self.C.items()},
            "rho": {str(m): v for m, v in self.rho.items()},
            "euler_bound": c.P,
            "S1": str(c.S1),
            "S2": str(c.S2),
            "S0": str(c.S0),
            "S0_half_bound": str(c.S0_half),
            "truncation_delta": str(c.delta),
            "locally_obstructed": c.obstructed,
            "divergent": c.divergent,
            "admissible_modulus": self.admissible_modulus,
            "admissible_classes": self.admissible,
        }


def density_profile(fam: Family, P: int, small_prime_bound: int = 50, rho_bound: int = 30) -> DensityProfile:
    inst = reduce(fam)
    modulus, classes = admissible_classes(fam, check=False)
    return DensityProfile(
        fam,
        delta_poly(fam),
        inst.u,
        inst.w0,
        inst.w1,
        inst.w2,
        {p: c_p(fam, p) for p in primes_up_to(small_prime_bound).tolist()},
        {m: rho_fn(fam, m) for m in range(1, rho_bound + 1)},
        euler_constants(fam, P),
        modulus,
        classes,
    )
