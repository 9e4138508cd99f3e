from math import gcd

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from mntgen.intpoly import (
    LinPoly,
    QuadPoly,
    content,
    evaluate,
    is_irreducible_quadratic,
    is_square,
    parse_lin,
    parse_poly,
    resultant,
    substitute_linear,
    value_gcd,
)

coef = st.integers(-10**6, 10**6)
small = st.integers(-50, 50)
nonzero = st.integers(-20, 20).filter(bool)
quads = st.builds(QuadPoly, coef, coef, coef).filter(lambda p: not p.is_zero())
true_quads = st.builds(QuadPoly, coef.filter(bool), coef, coef)
lins = st.builds(LinPoly, coef, coef)


def test_eval_examples():
    p = QuadPoly(1, 1, 1)
    assert evaluate(p, 0) == 1
    assert evaluate(p, 2) == 7
    assert evaluate(QuadPoly(9, 9, 3), -1) == 3
    assert LinPoly(-5, -1)(2) == -11


def test_content_examples():
    assert content(QuadPoly(9, 9, 3)) == 3
    assert content(QuadPoly(1, 1, 1)) == 1
    assert content(QuadPoly(4, 2, 2)) == 2
    with pytest.raises(ValueError, match="zero polynomial"):
        content(QuadPoly(0, 0, 0))


def test_value_gcd_examples():
    assert value_gcd(QuadPoly(3, 0, 0)) == 3
    assert value_gcd(QuadPoly(1, 1, 1)) == 1
    assert value_gcd(QuadPoly(4, 4, 2)) == 2
    # x^2 + x is always even although its content is 1
    assert value_gcd(QuadPoly(1, 1, 0)) == 2
    with pytest.raises(ValueError):
        value_gcd(QuadPoly(0, 0, 0))


def test_substitute_examples():
    assert substitute_linear(QuadPoly(1, 1, 1), 2, 0) == QuadPoly(4, 2, 1)
    assert substitute_linear(LinPoly(-5, -1), -1, -1) == LinPoly(5, 4)
    assert substitute_linear(QuadPoly(1, 0, 1), -1, -1) == QuadPoly(1, 2, 2)
    with pytest.raises(ValueError):
        substitute_linear(QuadPoly(1, 0, 1), 0, 3)


def test_irreducible_examples():
    assert is_irreducible_quadratic(QuadPoly(1, 1, 1))
    assert not is_irreducible_quadratic(QuadPoly(3, 0, 0))
    assert is_irreducible_quadratic(QuadPoly(60, 46, 9))
    assert QuadPoly(60, 46, 9).discriminant == -44
    with pytest.raises(ValueError, match="not quadratic"):
        is_irreducible_quadratic(QuadPoly(0, 1, 1))


def test_arithmetic_and_str():
    t = LinPoly(-7, -1)
    assert t * t == QuadPoly(49, 14, 1)
    assert (t * t - t * 3 + 3) == QuadPoly(49, 35, 7)
    assert QuadPoly(49, 35, 7) // 7 == QuadPoly(7, 5, 1)
    with pytest.raises(ValueError):
        QuadPoly(49, 35, 8) // 7
    assert str(QuadPoly(18, 0, 19)) == "18x^2 + 19"
    assert str(LinPoly(-1, 1)) == "-x + 1"
    assert str(QuadPoly(0, 0, 0)) == "0"
    assert QuadPoly(1, 2, 3).coeffs() == [3, 2, 1]
    assert QuadPoly.from_coeffs([3, 2, 1]) == QuadPoly(1, 2, 3)
    assert LinPoly.from_coeffs(LinPoly(4, -9).coeffs()) == LinPoly(4, -9)


def test_parse():
    assert parse_poly("-13x - 2") == QuadPoly(0, -13, -2)
    assert parse_poly("x^2 + x + 1") == QuadPoly(1, 1, 1)
    # repeated constant terms are summed, as printed
    assert parse_poly("18x^2 + 15 + 4") == QuadPoly(18, 0, 19)
    assert parse_lin("-x") == LinPoly(-1, 0)
    for bad in ("", "x^3", "2y", "x +"):
        with pytest.raises(ValueError):
            parse_poly(bad)
    with pytest.raises(ValueError):
        parse_lin("x^2")


@given(quads)
def test_parse_str_round_trip(p):
    assert parse_poly(str(p)) == p


@given(st.one_of(quads, lins), nonzero, small, small)
def test_substitution_commutes_with_evaluation(p, u, v, x):
    assert substitute_linear(p, u, v)(x) == p(u * x + v)


@given(quads, nonzero, small, nonzero, small)
def test_substitution_composes(p, u, v, u2, v2):
    lhs = substitute_linear(substitute_linear(p, u, v), u2, v2)
    assert lhs == substitute_linear(p, u * u2, u * v2 + v)


@given(quads)
def test_content_divides_value_gcd(p):
    assert value_gcd(p) % content(p) == 0


@given(st.builds(QuadPoly, small, small, small).filter(lambda p: not p.is_zero()))
def test_value_gcd_matches_range(p):
    g = 0
    for x in range(-100, 101):
        g = gcd(g, p(x))
    assert value_gcd(p) == g


@given(true_quads, nonzero, small)
def test_irreducibility_invariant_under_substitution(p, u, v):
    assert is_irreducible_quadratic(p) == is_irreducible_quadratic(substitute_linear(p, u, v))


@given(true_quads)
def test_irreducibility_matches_sympy(p):
    x = sympy.symbols("x")
    poly = sympy.Poly(p.c2 * x**2 + p.c1 * x + p.c0, x)
    factors = poly.factor_list()[1]
    sym_irreducible = len(factors) == 1 and factors[0][1] == 1 and factors[0][0].degree() == 2
    assert is_irreducible_quadratic(p) == sym_irreducible


@given(st.builds(QuadPoly, small, small, small), st.builds(QuadPoly, small, small, small))
def test_resultant_matches_sympy(p, s):
    # both taken as formal degree-2 polynomials: compare with the Sylvester determinant
    a2, a1, a0 = p.c2, p.c1, p.c0
    b2, b1, b0 = s.c2, s.c1, s.c0
    m = sympy.Matrix([
        [a2, a1, a0, 0],
        [0, a2, a1, a0],
        [b2, b1, b0, 0],
        [0, b2, b1, b0],
    ])
    assert resultant(p, s) == m.det()


@given(st.integers(0, 10**12))
def test_is_square(n):
    assert is_square(n) == (sympy.sqrt(n).is_integer)
    assert is_square(n * n)
    assert not is_square(-1 - n)
