import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from mntgen.arith import (
    IndeterminateSquarefree,
    count_roots_mod_p,
    euler_phi,
    factorize,
    is_prime,
    is_squarefree,
    jacobi,
    primality,
    primes_up_to,
    squarefree_kernel,
    squarefree_part,
)


def test_squarefree_examples():
    assert squarefree_part(44) == (11, 2)
    assert squarefree_part(19) == (19, 1)
    assert squarefree_part(4) == (1, 2)
    assert squarefree_part(1) == (1, 1)
    with pytest.raises(ValueError):
        squarefree_part(0)


def test_squarefree_indeterminate():
    # product of two primes just above the trial bound with a large prime square
    p = sympy.nextprime(10**6)
    big = sympy.nextprime(10**13)
    with pytest.raises(IndeterminateSquarefree):
        squarefree_part(p * big * big, bound=10**3)


def test_primes_up_to():
    assert primes_up_to(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_up_to(1).tolist() == []


def test_primality_levels():
    assert primality(2) == "prime"
    assert primality(1) == "composite"
    assert primality(2**61 - 1) == "prime"
    assert primality(2**127 - 1) == "probable"
    assert primality((2**61 - 1) * (2**89 - 1)) == "composite"


@given(st.integers(-10**4, 10**18))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == bool(sympy.isprime(n))


@given(st.integers(1, 10**12))
def test_squarefree_part_matches_factorint(n):
    D, m = squarefree_part(n)
    assert D * m * m == n
    assert all(e == 1 for e in sympy.factorint(D).values())
    assert is_squarefree(D)
    assert factorize(n) == sympy.factorint(n)


@given(st.integers(-10**6, 10**6).filter(bool))
def test_squarefree_kernel_signed(n):
    s = squarefree_kernel(n)
    assert (s > 0) == (n > 0)
    assert n % s == 0 and sympy.sqrt(sympy.Integer(n // s)).is_integer


@given(st.integers(-10**9, 10**9), st.integers(0, 10**6).map(lambda v: 2 * v + 1))
def test_jacobi_matches_sympy(a, n):
    assert jacobi(a, n) == sympy.jacobi_symbol(a % n, n)


def test_euler_phi():
    for n in range(1, 300):
        assert euler_phi(n) == sympy.totient(n)


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50), st.sampled_from([2, 3, 5, 7, 11, 13, 31]))
def test_count_roots_brute_force(c2, c1, c0, p):
    expected = sum(1 for x in range(p) if (c2 * x * x + c1 * x + c0) % p == 0)
    assert count_roots_mod_p(c2, c1, c0, p) == expected
