"""Hot int64 loops, in two interchangeable implementations.

Every kernel exists as a numba ``@njit`` function and as a vectorized numpy
function with the same signature and results. The module-level names
dispatch to numba unless ``MNTGEN_NO_NUMBA=1`` is set or numba is missing.

All kernels work on int64 and assume the caller has checked the ranges
(see the ``*_fits`` helpers); big-integer work never reaches this module.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("MNTGEN_NO_NUMBA", "0") not in ("1", "true", "yes")

INT64_SAFE = 1 << 62
# residue counts evaluate c2*n*n with n < modulus and c2 reduced mod modulus
RESIDUE_MODULUS_MAX = 1 << 20
NUMPY_CHUNK = 1 << 20


def residue_count_fits(modulus: int) -> bool:
    return 0 < modulus <= RESIDUE_MODULUS_MAX


def square_scan_fits(g: int, f_hi: int, m_hi: int) -> bool:
    return g * m_hi * m_hi + abs(f_hi) < INT64_SAFE


# the wide scan takes y from a float sqrt, exact while y stays below 2**50
WIDE_Y_MAX = 1 << 50


def wide_scan_fits(g: int, f_hi: int, m_hi: int) -> bool:
    return g * m_hi * m_hi + abs(f_hi) < WIDE_Y_MAX * WIDE_Y_MAX


# --------------------------------------------------------------------------
# numba implementations


def _isqrt_i64(v):
    s = np.int64(np.sqrt(np.float64(v)))
    while s * s > v:
        s -= 1
    while (s + 1) * (s + 1) <= v:
        s += 1
    return s


def _cp_count_py(q, r, delta, p):
    m2 = p * p
    q2, q1, q0 = q[0] % p, q[1] % p, q[2] % p
    r2, r1, r0 = r[0] % p, r[1] % p, r[2] % p
    d2, d1, d0 = delta[0] % m2, delta[1] % m2, delta[2] % m2
    count = 0
    for n in range(m2):
        np_ = n % p
        if (q2 * np_ * np_ + q1 * np_ + q0) % p == 0:
            count += 1
            continue
        if (r2 * np_ * np_ + r1 * np_ + r0) % p == 0:
            count += 1
            continue
        if ((d2 * n % m2) * n + d1 * n + d0) % m2 == 0:
            count += 1
    return count


def _rho_count_py(q, r, delta, m, primes):
    m2 = m * m
    d2, d1, d0 = delta[0] % m2, delta[1] % m2, delta[2] % m2
    count = 0
    for beta in range(m2):
        if ((d2 * beta % m2) * beta + d1 * beta + d0) % m2 != 0:
            continue
        ok = True
        for i in range(primes.shape[0]):
            p = primes[i]
            b = beta % p
            if (q[0] % p * b * b + q[1] % p * b + q[2] % p) % p == 0:
                ok = False
                break
            if (r[0] % p * b * b + r[1] % p * b + r[2] % p) % p == 0:
                ok = False
                break
        if ok:
            count += 1
    return count


def _square_hits_py(g, f_lo, f_hi, m_lo, m_hi):
    ms = []
    ys = []
    for m in range(m_lo, m_hi + 1):
        v = g * m * m
        lo = v + f_lo
        hi = v + f_hi
        if hi < 0:
            continue
        if lo <= 0:
            y = 0
        else:
            y = _isqrt_i64(lo - 1) + 1
        while y * y <= hi:
            ms.append(m)
            ys.append(y)
            y += 1
    out_m = np.empty(len(ms), dtype=np.int64)
    out_y = np.empty(len(ys), dtype=np.int64)
    for i in range(len(ms)):
        out_m[i] = ms[i]
        out_y[i] = ys[i]
    return out_m, out_y


def _square_hits_wide_py(g, f_lo, f_hi, m_lo, m_hi):
    # y^2 - g*m^2 is evaluated mod 2^64; the true value is within a few y of
    # [f_lo, f_hi] for every candidate, so the wrapped value is exact
    ms = []
    ys = []
    gu = np.uint64(g)
    for m in range(m_lo, m_hi + 1):
        v = np.float64(g) * np.float64(m) * np.float64(m)
        top = v + np.float64(f_hi)
        if top < 0:
            continue
        bottom = v + np.float64(f_lo)
        y0 = np.int64(np.sqrt(bottom)) - 1 if bottom > 0 else np.int64(0)
        if y0 < 0:
            y0 = np.int64(0)
        y1 = np.int64(np.sqrt(top)) + 1
        mu = np.uint64(m)
        gm2 = gu * mu * mu
        for y in range(y0, y1 + 1):
            yu = np.uint64(y)
            diff = np.int64(yu * yu - gm2)
            if f_lo <= diff <= f_hi:
                ms.append(m)
                ys.append(y)
    out_m = np.empty(len(ms), dtype=np.int64)
    out_y = np.empty(len(ys), dtype=np.int64)
    for i in range(len(ms)):
        out_m[i] = ms[i]
        out_y[i] = ys[i]
    return out_m, out_y


def _strip_small_primes_py(n, primes):
    """Return (squarefree cofactor, square root part, remainder, complete)."""
    sqf = 1
    sq = 1
    rem = n
    for i in range(primes.shape[0]):
        p = primes[i]
        if p * p > rem:
            return sqf, sq, rem, True
        if rem % p == 0:
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            if e % 2 == 1:
                sqf *= p
            for _ in range(e // 2):
                sq *= p
    n_pr = primes.shape[0]
    return sqf, sq, rem, rem == 1 or (n_pr > 0 and primes[n_pr - 1] * primes[n_pr - 1] > rem)


def _sieve_hits_py(c2, c1, c0, x0, count, primes):
    """Mark x = x0 + i whose quadratic value has a prime factor in ``primes``."""
    hit = np.zeros(count, dtype=np.bool_)
    for j in range(primes.shape[0]):
        p = primes[j]
        a2 = c2 % p
        a1 = c1 % p
        a0 = c0 % p
        start = x0 % p
        for res in range(p):
            if (a2 * res * res + a1 * res + a0) % p != 0:
                continue
            first = (res - start) % p
            for i in range(first, count, p):
                hit[i] = True
    return hit


if HAVE_NUMBA:
    _isqrt_i64 = njit(cache=True)(_isqrt_i64)
    _nb_cp_count = njit(cache=True)(_cp_count_py)
    _nb_rho_count = njit(cache=True)(_rho_count_py)
    _nb_square_hits = njit(cache=True)(_square_hits_py)
    _nb_square_hits_wide = njit(cache=True)(_square_hits_wide_py)
    _nb_strip_small_primes = njit(cache=True)(_strip_small_primes_py)
    _nb_sieve_hits = njit(cache=True)(_sieve_hits_py)


def _as_i64(coeffs):
    return np.array([int(c) for c in coeffs], dtype=np.int64)


def _reduce(coeffs, mod):
    return np.array([int(c) % mod for c in coeffs], dtype=np.int64)


# --------------------------------------------------------------------------
# numpy implementations


def _np_isqrt(v: np.ndarray) -> np.ndarray:
    s = np.sqrt(v.astype(np.float64)).astype(np.int64)
    while True:
        over = s * s > v
        if not over.any():
            break
        s[over] -= 1
    while True:
        under = (s + 1) * (s + 1) <= v
        if not under.any():
            break
        s[under] += 1
    return s


def _np_cp_count(q, r, delta, p):
    m2 = p * p
    qr = _reduce(q, p)
    rr = _reduce(r, p)
    dr = _reduce(delta, m2)
    total = 0
    # roots of q, r mod p taken as a mask over residues mod p
    res = np.arange(p, dtype=np.int64)
    bad = ((qr[0] * res % p) * res + qr[1] * res + qr[2]) % p == 0
    bad |= ((rr[0] * res % p) * res + rr[1] * res + rr[2]) % p == 0
    for start in range(0, m2, NUMPY_CHUNK):
        n = np.arange(start, min(m2, start + NUMPY_CHUNK), dtype=np.int64)
        hit = bad[n % p]
        hit |= ((dr[0] * n % m2) * n + dr[1] * n + dr[2]) % m2 == 0
        total += int(hit.sum())
    return total


def _np_rho_count(q, r, delta, m, primes):
    m2 = m * m
    dr = _reduce(delta, m2)
    total = 0
    for start in range(0, m2, NUMPY_CHUNK):
        beta = np.arange(start, min(m2, start + NUMPY_CHUNK), dtype=np.int64)
        ok = ((dr[0] * beta % m2) * beta + dr[1] * beta + dr[2]) % m2 == 0
        for p in primes:
            p = int(p)
            qr = _reduce(q, p)
            rr = _reduce(r, p)
            b = beta % p
            ok &= ((qr[0] * b % p) * b + qr[1] * b + qr[2]) % p != 0
            ok &= ((rr[0] * b % p) * b + rr[1] * b + rr[2]) % p != 0
        total += int(ok.sum())
    return total


def _np_square_hits(g, f_lo, f_hi, m_lo, m_hi):
    out_m = []
    out_y = []
    for start in range(m_lo, m_hi + 1, NUMPY_CHUNK):
        m = np.arange(start, min(m_hi, start + NUMPY_CHUNK - 1) + 1, dtype=np.int64)
        v = g * m * m
        hi = v + f_hi
        lo = v + f_lo
        keep = hi >= 0
        m, hi, lo = m[keep], hi[keep], lo[keep]
        y_lo = np.zeros_like(lo)
        pos = lo > 0
        y_lo[pos] = _np_isqrt(lo[pos] - 1) + 1
        y_hi = _np_isqrt(hi)
        n_y = y_hi - y_lo + 1
        has = n_y > 0
        if not has.any():
            continue
        m, y_lo, n_y = m[has], y_lo[has], n_y[has]
        reps = np.repeat(np.arange(m.size), n_y)
        offs = np.arange(reps.size) - np.repeat(np.cumsum(n_y) - n_y, n_y)
        out_m.append(m[reps])
        out_y.append(y_lo[reps] + offs)
    if not out_m:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy()
    return np.concatenate(out_m), np.concatenate(out_y)


def _np_square_hits_wide(g, f_lo, f_hi, m_lo, m_hi):
    out_m = []
    out_y = []
    gu = np.uint64(g)
    for start in range(m_lo, m_hi + 1, NUMPY_CHUNK):
        m = np.arange(start, min(m_hi, start + NUMPY_CHUNK - 1) + 1, dtype=np.int64)
        v = float(g) * m.astype(np.float64) ** 2
        top = v + f_hi
        keep = top >= 0
        m, v, top = m[keep], v[keep], top[keep]
        bottom = v + f_lo
        y0 = np.where(bottom > 0, np.sqrt(np.maximum(bottom, 0)).astype(np.int64) - 1, 0)
        y0 = np.maximum(y0, 0)
        y1 = np.sqrt(top).astype(np.int64) + 1
        n_y = y1 - y0 + 1
        reps = np.repeat(np.arange(m.size), n_y)
        offs = np.arange(reps.size) - np.repeat(np.cumsum(n_y) - n_y, n_y)
        mm = m[reps]
        yy = y0[reps] + offs
        mu = mm.astype(np.uint64)
        yu = yy.astype(np.uint64)
        diff = (yu * yu - gu * mu * mu).view(np.int64)
        hit = (diff >= f_lo) & (diff <= f_hi)
        out_m.append(mm[hit])
        out_y.append(yy[hit])
    if not out_m:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy()
    return np.concatenate(out_m), np.concatenate(out_y)


def _np_strip_small_primes(n, primes):
    limit = int(np.sqrt(float(n))) + 1
    cand = primes[primes <= limit]
    divs = cand[n % cand == 0]
    sqf = 1
    sq = 1
    rem = int(n)
    for p in divs:
        p = int(p)
        # same stopping rule as the loop version: leave a prime remainder alone
        if p * p > rem:
            break
        e = 0
        while rem % p == 0:
            rem //= p
            e += 1
        if e % 2:
            sqf *= p
        sq *= p ** (e // 2)
    complete = rem == 1 or (primes.size > 0 and int(primes[-1]) ** 2 > rem)
    return sqf, sq, rem, complete


def _np_sieve_hits(c2, c1, c0, x0, count, primes):
    hit = np.zeros(count, dtype=np.bool_)
    for p in primes:
        p = int(p)
        res = np.arange(p, dtype=np.int64)
        roots = res[((c2 % p) * res % p * res + (c1 % p) * res + c0 % p) % p == 0]
        for root in roots:
            first = (int(root) - x0) % p
            hit[first::p] = True
    return hit


# --------------------------------------------------------------------------
# public dispatch


def cp_count(q, r, delta, p: int, *, impl=None) -> int:
    """#{n mod p^2 : p | q(n), or p | r(n), or p^2 | delta(n)}.

    Polynomials are descending coefficient triples.
    """
    use = _pick(impl)
    if use == "numba":
        return int(_nb_cp_count(_reduce(q, p), _reduce(r, p), _reduce(delta, p * p), np.int64(p)))
    return _np_cp_count(q, r, delta, p)


def rho_count(q, r, delta, m: int, primes, *, impl=None) -> int:
    """#{beta mod m^2 : m^2 | delta(beta), p does not divide q(beta)r(beta) for p | m}."""
    primes = np.asarray(primes, dtype=np.int64)
    use = _pick(impl)
    if use == "numba":
        return int(
            _nb_rho_count(_as_i64(q), _as_i64(r), _reduce(delta, m * m), np.int64(m), primes)
        )
    return _np_rho_count(q, r, delta, m, primes)


def square_hits(g: int, f_lo: int, f_hi: int, m_lo: int, m_hi: int, *, impl=None):
    """All ``(m, y)`` with ``m_lo <= m <= m_hi``, ``y >= 0`` and ``f_lo <= y^2 - g*m^2 <= f_hi``.

    Ranges where ``g*m^2`` overflows int64 go through the wide scan.
    """
    use = _pick(impl)
    bound = max(abs(f_lo), abs(f_hi))
    if square_scan_fits(g, bound, m_hi):
        if use == "numba":
            return _nb_square_hits(np.int64(g), np.int64(f_lo), np.int64(f_hi), np.int64(m_lo), np.int64(m_hi))
        return _np_square_hits(g, f_lo, f_hi, m_lo, m_hi)
    if not wide_scan_fits(g, bound, m_hi):
        raise ValueError("square scan range too large for int64 kernels")
    if use == "numba":
        return _nb_square_hits_wide(np.int64(g), np.int64(f_lo), np.int64(f_hi), np.int64(m_lo), np.int64(m_hi))
    return _np_square_hits_wide(g, f_lo, f_hi, m_lo, m_hi)


def strip_small_primes(n: int, primes: np.ndarray, *, impl=None):
    """Trial-divide ``n`` by ``primes``.

    Returns ``(sqf, sq, rem, complete)`` with ``n == sqf * sq**2 * rem``; when
    ``complete`` is true ``rem`` is 1 or a prime.
    """
    use = _pick(impl)
    if use == "numba":
        sqf, sq, rem, complete = _nb_strip_small_primes(np.int64(n), primes)
    else:
        sqf, sq, rem, complete = _np_strip_small_primes(n, primes)
    return int(sqf), int(sq), int(rem), bool(complete)


def sieve_hits(coeffs, x0: int, count: int, primes: np.ndarray, *, impl=None) -> np.ndarray:
    """Boolean mask over ``x0 .. x0+count-1``: quadratic value divisible by some prime in ``primes``."""
    c2, c1, c0 = (int(c) for c in coeffs)
    use = _pick(impl)
    if use == "numba":
        return _nb_sieve_hits(np.int64(c2), np.int64(c1), np.int64(c0), np.int64(x0), np.int64(count), primes)
    return _np_sieve_hits(c2, c1, c0, x0, count, primes)


def _pick(impl):
    if impl is None:
        return "numba" if USE_NUMBA else "numpy"
    if impl == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    if impl not in ("numba", "numpy"):
        raise ValueError(f"unknown kernel implementation {impl!r}")
    return impl


numba_impl = SimpleNamespace(
    **{name: (lambda fn: lambda *a, **kw: fn(*a, impl="numba", **kw))(fn)
       for name, fn in [("cp_count", cp_count), ("rho_count", rho_count), ("square_hits", square_hits),
                        ("strip_small_primes", strip_small_primes), ("sieve_hits", sieve_hits)]}
)
numpy_impl = SimpleNamespace(
    **{name: (lambda fn: lambda *a, **kw: fn(*a, impl="numpy", **kw))(fn)
       for name, fn in [("cp_count", cp_count), ("rho_count", rho_count), ("square_hits", square_hits),
                        ("strip_small_primes", strip_small_primes), ("sieve_hits", sieve_hits)]}
)
