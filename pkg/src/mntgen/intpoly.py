"""Exact integer polynomials of degree at most two.

Everything here is plain Python ``int`` arithmetic, so coefficient growth
never overflows. Polynomials are immutable and hashable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd, isqrt


@dataclass(frozen=True)
class LinPoly:
    """``a*x + b``."""

    a: int
    b: int

    def __call__(self, x: int) -> int:
        return self.a * x + self.b

    def __neg__(self) -> LinPoly:
        return LinPoly(-self.a, -self.b)

    def __add__(self, other):
        if isinstance(other, int):
            return LinPoly(self.a, self.b + other)
        if isinstance(other, LinPoly):
            return LinPoly(self.a + other.a, self.b + other.b)
        if isinstance(other, QuadPoly):
            return self.as_quad() + other
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, LinPoly, QuadPoly)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return LinPoly(self.a * other, self.b * other)
        if isinstance(other, LinPoly):
            return QuadPoly(self.a * other.a, self.a * other.b + self.b * other.a, self.b * other.b)
        return NotImplemented

    __rmul__ = __mul__

    def as_quad(self) -> QuadPoly:
        return QuadPoly(0, self.a, self.b)

    def coeffs(self) -> list[int]:
        """Ascending coefficients ``[b, a]``."""
        return [self.b, self.a]

    @classmethod
    def from_coeffs(cls, coeffs) -> LinPoly:
        b, a = (int(c) for c in coeffs)
        return cls(a, b)

    def __str__(self) -> str:
        return _format([self.b, self.a])


@dataclass(frozen=True)
class QuadPoly:
    """``c2*x**2 + c1*x + c0``."""

    c2: int
    c1: int
    c0: int

    def __call__(self, x: int) -> int:
        return (self.c2 * x + self.c1) * x + self.c0

    def __neg__(self) -> QuadPoly:
        return QuadPoly(-self.c2, -self.c1, -self.c0)

    def __add__(self, other):
        if isinstance(other, int):
            return QuadPoly(self.c2, self.c1, self.c0 + other)
        if isinstance(other, LinPoly):
            other = other.as_quad()
        if isinstance(other, QuadPoly):
            return QuadPoly(self.c2 + other.c2, self.c1 + other.c1, self.c0 + other.c0)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, LinPoly, QuadPoly)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return QuadPoly(self.c2 * other, self.c1 * other, self.c0 * other)
        return NotImplemented

    __rmul__ = __mul__

    def __floordiv__(self, k: int) -> QuadPoly:
        if self.c2 % k or self.c1 % k or self.c0 % k:
            raise ValueError(f"{self} is not divisible by {k}")
        return QuadPoly(self.c2 // k, self.c1 // k, self.c0 // k)

    def is_zero(self) -> bool:
        return self.c2 == 0 and self.c1 == 0 and self.c0 == 0

    @property
    def discriminant(self) -> int:
        return self.c1 * self.c1 - 4 * self.c2 * self.c0

    def derivative(self) -> LinPoly:
        return LinPoly(2 * self.c2, self.c1)

    def coeffs(self) -> list[int]:
        """Ascending coefficients ``[c0, c1, c2]``."""
        return [self.c0, self.c1, self.c2]

    @classmethod
    def from_coeffs(cls, coeffs) -> QuadPoly:
        c0, c1, c2 = (int(c) for c in coeffs)
        return cls(c2, c1, c0)

    def __str__(self) -> str:
        return _format([self.c0, self.c1, self.c2])


def _format(asc: list[int]) -> str:
    terms = []
    for deg in range(len(asc) - 1, -1, -1):
        c = asc[deg]
        if c == 0:
            continue
        mag = abs(c)
        if deg == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else str(mag)) + ("x" if deg == 1 else f"x^{deg}")
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def as_quad(p: QuadPoly | LinPoly) -> QuadPoly:
    return p.as_quad() if isinstance(p, LinPoly) else p


def evaluate(p: QuadPoly | LinPoly, x: int) -> int:
    return p(x)


def content(p: QuadPoly) -> int:
    """gcd of the coefficients."""
    p = as_quad(p)
    if p.is_zero():
        raise ValueError("zero polynomial")
    return gcd(gcd(p.c2, p.c1), p.c0)


def value_gcd(p: QuadPoly) -> int:
    """gcd of ``p(x)`` over all integers ``x``.

    For degree <= 2 the values at 0, 1, 2 generate the same ideal as all
    values (the forward differences of order <= 2 are integer combinations
    of them).
    """
    p = as_quad(p)
    if p.is_zero():
        raise ValueError("zero polynomial")
    return gcd(gcd(p(0), p(1)), p(2))


def substitute_linear(p, u: int, v: int):
    """Return ``p(u*x + v)`` as a polynomial of the same kind."""
    if u == 0:
        raise ValueError("u must be nonzero")
    if isinstance(p, LinPoly):
        return LinPoly(p.a * u, p.a * v + p.b)
    return QuadPoly(
        p.c2 * u * u,
        2 * p.c2 * u * v + p.c1 * u,
        p.c2 * v * v + p.c1 * v + p.c0,
    )


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def is_irreducible_quadratic(p: QuadPoly) -> bool:
    """Irreducible over Q iff the discriminant is not a perfect square."""
    if p.c2 == 0:
        raise ValueError("not quadratic")
    return not is_square(p.discriminant)


def resultant(p: QuadPoly, s: QuadPoly) -> int:
    """Resultant of two quadratics (Sylvester determinant, both taken as degree 2)."""
    a2, a1, a0 = p.c2, p.c1, p.c0
    b2, b1, b0 = s.c2, s.c1, s.c0
    # Res = (a2 b0 - a0 b2)^2 - (a2 b1 - a1 b2)(a1 b0 - a0 b1)
    return (a2 * b0 - a0 * b2) ** 2 - (a2 * b1 - a1 * b2) * (a1 * b0 - a0 * b1)


_TERM = re.compile(r"\s*([+-])?\s*(\d*)\s*(x(?:\^(\d+))?)?\s*")


def parse_poly(text: str) -> QuadPoly:
    """Parse strings such as ``"-13x - 2"`` or ``"18x^2 + 15 + 4"``.

    Repeated powers are summed, so misprinted entries parse to the
    polynomial they literally denote.
    """
    coeffs = [0, 0, 0]
    pos = 0
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at {pos}")
        sign, digits, xpart, power = m.groups()
        if not digits and not xpart:
            raise ValueError(f"cannot parse {text!r} at {pos}")
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        deg = 0 if not xpart else int(power or 1)
        if deg > 2:
            raise ValueError(f"degree {deg} term in {text!r}")
        coeffs[deg] += c
        pos = m.end()
    return QuadPoly(coeffs[2], coeffs[1], coeffs[0])


def parse_lin(text: str) -> LinPoly:
    p = parse_poly(text)
    if p.c2:
        raise ValueError(f"{text!r} is not linear")
    return LinPoly(p.c1, p.c0)
