import os
from math import isqrt
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mntgen import _kernels
from mntgen.arith import primes_up_to

pytestmark = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")

coef = st.integers(-10**4, 10**4)
triple = st.tuples(coef.filter(bool), coef, coef)
small_primes = st.sampled_from(primes_up_to(200).tolist())


@given(triple, triple, triple, small_primes)
@settings(deadline=None, max_examples=60)
def test_cp_count_agree(q, r, delta, p):
    a = _kernels.cp_count(q, r, delta, p, impl="numba")
    b = _kernels.cp_count(q, r, delta, p, impl="numpy")
    brute = sum(
        1
        for n in range(p * p)
        if (q[0] * n * n + q[1] * n + q[2]) % p == 0
        or (r[0] * n * n + r[1] * n + r[2]) % p == 0
        or (delta[0] * n * n + delta[1] * n + delta[2]) % (p * p) == 0
    )
    assert a == b == brute


@given(triple, triple, triple, st.integers(1, 120))
@settings(deadline=None, max_examples=60)
def test_rho_count_agree(q, r, delta, m):
    primes = sorted({p for p in primes_up_to(m).tolist() if m % p == 0})
    a = _kernels.rho_count(q, r, delta, m, primes, impl="numba")
    b = _kernels.rho_count(q, r, delta, m, primes, impl="numpy")
    assert a == b


@given(st.integers(1, 10**4), st.integers(-10**4, 10**4), st.integers(0, 200), st.integers(0, 2000))
@settings(deadline=None, max_examples=60)
def test_square_hits_agree(g, f_lo, width, m_hi):
    f_hi = f_lo + width
    ma, ya = _kernels.square_hits(g, f_lo, f_hi, 0, m_hi, impl="numba")
    mb, yb = _kernels.square_hits(g, f_lo, f_hi, 0, m_hi, impl="numpy")
    a = sorted(zip(ma.tolist(), ya.tolist()))
    b = sorted(zip(mb.tolist(), yb.tolist()))
    assert a == b
    for m, y in a:
        assert f_lo <= y * y - g * m * m <= f_hi and y >= 0


@given(st.integers(1, 2**60))
@settings(deadline=None, max_examples=100)
def test_strip_small_primes_agree(n):
    primes = primes_up_to(1000)
    a = _kernels.strip_small_primes(n, primes, impl="numba")
    b = _kernels.strip_small_primes(n, primes, impl="numpy")
    assert a == b
    sqf, sq, rem, complete = a
    assert sqf * sq * sq * rem == n


@given(triple, st.integers(-10**5, 10**5), st.integers(1, 3000))
@settings(deadline=None, max_examples=60)
def test_sieve_hits_agree(coeffs, x0, count):
    primes = primes_up_to(100)
    a = _kernels.sieve_hits(coeffs, x0, count, primes, impl="numba")
    b = _kernels.sieve_hits(coeffs, x0, count, primes, impl="numpy")
    assert np.array_equal(a, b)
    c2, c1, c0 = coeffs
    for i in range(0, count, max(1, count // 20)):
        x = x0 + i
        v = c2 * x * x + c1 * x + c0
        assert bool(a[i]) == any(v % p == 0 for p in primes.tolist())


def test_unknown_impl():
    with pytest.raises(ValueError):
        _kernels.cp_count((1, 0, 1), (1, 0, 1), (1, 0, 1), 3, impl="cuda")


def test_env_flag_selects_numpy():
    code = "from mntgen import _kernels; print(_kernels.USE_NUMBA)"
    env = dict(os.environ, MNTGEN_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
    env["MNTGEN_NO_NUMBA"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "True"


@given(st.integers(2, 10**4), st.integers(-500, 500), st.integers(0, 100), st.integers(0, 3000))
@settings(deadline=None, max_examples=40)
def test_wide_scan_agrees_with_exact_scan(g, f_lo, width, m_hi):
    f_hi = f_lo + width
    a = _kernels._nb_square_hits(np.int64(g), np.int64(f_lo), np.int64(f_hi), np.int64(0), np.int64(m_hi))
    b = _kernels._nb_square_hits_wide(np.int64(g), np.int64(f_lo), np.int64(f_hi), np.int64(0), np.int64(m_hi))
    c = _kernels._np_square_hits_wide(g, f_lo, f_hi, 0, m_hi)
    norm = [sorted(zip(x[0].tolist(), x[1].tolist())) for x in (a, b, c)]
    assert norm[0] == norm[1] == norm[2]


@given(st.integers(10**5, 10**8), st.integers(-300, 300).filter(bool), st.integers(10**7, 10**9))
@settings(deadline=None, max_examples=40)
def test_wide_scan_beyond_int64(g, f, m0):
    # g*m^2 overflows int64 here; hits must satisfy the equation in exact arithmetic
    assert not _kernels.square_scan_fits(g, abs(f), m0 + 2000)
    for impl in ("numba", "numpy"):
        ms, ys = _kernels.square_hits(g, f, f, m0, m0 + 2000, impl=impl)
        for m, y in zip(ms.tolist(), ys.tolist()):
            assert y * y - g * m * m == f
    # plant a solution and make sure it is found
    y = isqrt(g * m0 * m0) + 1
    f_planted = y * y - g * m0 * m0
    for impl in ("numba", "numpy"):
        ms, ys = _kernels.square_hits(g, f_planted, f_planted, m0, m0, impl=impl)
        assert (ms.tolist(), ys.tolist()) == ([m0], [y])


def test_benchmark_script_runs():
    script = os.path.join(os.path.dirname(__file__), "..", "benchmarks", "bench_kernels.py")
    out = subprocess.run(
        [sys.executable, script, "--quick", "--repeat", "1"], capture_output=True, text=True, check=True
    )
    assert "square_hits" in out.stdout
