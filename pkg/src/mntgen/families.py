"""Families ``(k, h, d, t, r, q)`` of near prime-order MNT curves.

A family is a linear trace ``t(x)`` together with the quadratics ``r(x)``
(subgroup order) and ``q(x)`` (field size) satisfying

    Phi_k(t(x) - 1) = d * r(x)        q(x) = h * r(x) + t(x) - 1

for embedding degree ``k`` in {3, 4, 6}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import gcd

from .intpoly import (
    LinPoly,
    QuadPoly,
    content,
    is_irreducible_quadratic,
    substitute_linear,
    value_gcd,
)

EPSILON = {3: 1, 4: 2, 6: 3}


def epsilon_for(k: int) -> int:
    try:
        return EPSILON[k]
    except KeyError:
        raise ValueError(f"unsupported embedding degree k={k}; expected 3, 4 or 6") from None


def phi_k(k: int, n: int) -> int:
    """Phi_k(n) for k in {3, 4, 6}."""
    eps = epsilon_for(k)
    # Phi_k(t - 1) = t^2 - eps*t + eps, so Phi_k(n) is that at t = n + 1
    t = n + 1
    return t * t - eps * t + eps


class FamilyRejected(ValueError):
    """Candidate ``q(x)`` fails one of the family predicates."""

    def __init__(self, reason: str, q: QuadPoly):
        super().__init__(f"{reason}: q(x) = {q}")
        self.reason = reason
        self.q = q


@dataclass(frozen=True)
class Family:
    k: int
    h: int
    d: int
    t: LinPoly
    r: QuadPoly
    q: QuadPoly

    @property
    def epsilon(self) -> int:
        return epsilon_for(self.k)

    @property
    def n(self) -> QuadPoly:
        """Group order polynomial ``h * r(x)``."""
        return self.r * self.h

    @classmethod
    def from_trace(cls, k: int, h: int, t: LinPoly) -> Family:
        """Build the family for trace ``t`` and cofactor ``h`` without filtering."""
        d, r = split_d_r(k, t)
        return cls(k, h, d, t, r, r * h + t - 1)

    def substitute(self, u: int, v: int) -> Family:
        """The family reparametrized by ``x -> u*x + v``."""
        return Family(
            self.k,
            self.h,
            self.d,
            substitute_linear(self.t, u, v),
            substitute_linear(self.r, u, v),
            substitute_linear(self.q, u, v),
        )

    def canonical(self) -> Family:
        _, (sign, shift) = canonicalize(self.t)
        return self.substitute(sign, shift)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "h": self.h,
            "d": self.d,
            "t": self.t.coeffs(),
            "r": self.r.coeffs(),
            "q": self.q.coeffs(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> Family:
        return cls(
            int(data["k"]),
            int(data["h"]),
            int(data["d"]),
            LinPoly.from_coeffs(data["t"]),
            QuadPoly.from_coeffs(data["r"]),
            QuadPoly.from_coeffs(data["q"]),
        )

    def __str__(self) -> str:
        return f"k={self.k} h={self.h} d={self.d}: t={self.t}, r={self.r}, q={self.q}"


def phi_shifted(k: int, t: LinPoly) -> QuadPoly:
    """Phi_k(t(x) - 1) = t^2 - eps*t + eps, expanded."""
    eps = epsilon_for(k)
    return t * t - t * eps + eps


def split_d_r(k: int, t: LinPoly) -> tuple[int, QuadPoly]:
    """Split Phi_k(t(x) - 1) into its content ``d`` and primitive part ``r``."""
    if t.a == 0:
        raise ValueError("trace polynomial must have a nonzero leading coefficient")
    f = phi_shifted(k, t)
    d = content(f)
    return d, f // d


def fixed_divisor(q: QuadPoly, r: QuadPoly) -> int:
    """gcd of ``q(x) * r(x)`` over all integers ``x``.

    The product has degree 4, so its values at 0..4 already generate the
    ideal of all its values. A result > 1 means ``q(x)`` and ``r(x)`` are
    never simultaneously coprime to that divisor, so they cannot both be
    large primes.
    """
    return reduce(gcd, (q(x) * r(x) for x in range(5)))


def make_q(h: int, r: QuadPoly, t: LinPoly) -> QuadPoly:
    """``q = h*r + t - 1``, raising :class:`FamilyRejected` if it cannot represent primes."""
    q = r * h + t - 1
    if q.c2 == 0 or not is_irreducible_quadratic(q):
        raise FamilyRejected("reducible", q)
    if fixed_divisor(q, r) != 1:
        raise FamilyRejected("common factor", q)
    return q


def canonicalize(t: LinPoly) -> tuple[LinPoly, tuple[int, int]]:
    """Equivalent trace with ``a > 0`` and ``0 <= b < a``.

    Returns ``(t_canon, (sign, shift))`` with ``t_canon(x) == t(sign*x + shift)``.
    """
    if t.a == 0:
        raise ValueError("trace polynomial must have a nonzero leading coefficient")
    sign = 1 if t.a > 0 else -1
    width = abs(t.a)
    shift = (t.b % width - t.b) // t.a
    return substitute_linear(t, sign, shift), (sign, shift)


def is_deduced(
    candidate: tuple[LinPoly, QuadPoly], base: tuple[LinPoly, QuadPoly]
) -> tuple[int, int] | None:
    """``(u, v)`` with ``candidate == base o (u*x + v)``, or None."""
    t, r = candidate
    tb, rb = base
    if t.a % tb.a or (t.b - tb.b) % tb.a:
        return None
    u = t.a // tb.a
    v = (t.b - tb.b) // tb.a
    if substitute_linear(rb, u, v) != r:
        return None
    return u, v


def are_equivalent(f1: Family, f2: Family) -> bool:
    """Strict equivalence: ``f1 == f2 o (+-x + v)`` on t, r and q, same k and h."""
    if (f1.k, f1.h) != (f2.k, f2.h):
        return False
    uv = is_deduced((f1.t, f1.r), (f2.t, f2.r))
    if uv is None or abs(uv[0]) != 1:
        return False
    return substitute_linear(f2.q, *uv) == f1.q


def is_primitive_trace(k: int, t: LinPoly) -> bool:
    """Primitive traces have ``|a| == d`` (the content of Phi_k(t - 1))."""
    return abs(t.a) == content(phi_shifted(k, t))


def primitive_bases(k: int, t: LinPoly) -> list[LinPoly]:
    """Canonical primitive traces ``t'`` with ``t == t' o (u*x + v)`` for integers u, v.

    Only the traces are related here; the split of Phi_k into ``d * r`` may
    differ between ``t`` and its bases.
    """
    a = abs(t.a)
    bases = []
    for dd in range(1, a + 1):
        if a % dd:
            continue
        base = LinPoly(dd, t.b % dd)
        if is_primitive_trace(k, base):
            bases.append(base)
    return bases


def shared_primitive_base(k: int, t1: LinPoly, t2: LinPoly) -> LinPoly | None:
    """The common primitive base with the largest leading coefficient, if it exceeds 1.

    Every trace is deduced from ``x`` itself, so a shared base with ``a == 1``
    carries no information and is reported as None.
    """
    common = set(primitive_bases(k, t1)) & set(primitive_bases(k, t2))
    best = max(common, key=lambda p: p.a, default=None)
    if best is None or best.a == 1:
        return None
    return best


def generate(k: int, h_max: int) -> list[Family]:
    """All primitive families with cofactor ``h <= h_max``, one per equivalence class.

    Traces ``a*x + b`` are scanned with ``|a|`` ascending (positive first) and
    ``0 <= b < |a|``, so each class is first met in canonical form and every
    deduction afterwards is recognised against the list of seen tuples.
    Output is sorted by ``(h, d, b)``.
    """
    eps = epsilon_for(k)
    if h_max < 1:
        raise ValueError("h_max must be >= 1")
    a_max = 4 * h_max
    seen: dict[int, list[tuple[LinPoly, QuadPoly]]] = {}
    families = []
    for width in range(1, a_max + 1):
        for a in (width, -width):
            for b in range(width):
                t = LinPoly(a, b)
                d, r = split_d_r(k, t)
                if _deduced_from_seen(t, r, seen):
                    continue
                seen.setdefault(abs(a), []).append((t, r))
                for h in range(max(1, -(-d // 4)), h_max + 1):
                    if 4 * h == d:
                        continue
                    try:
                        q = make_q(h, r, t)
                    except FamilyRejected:
                        continue
                    families.append(Family(k, h, d, t, r, q))
    assert all(f.epsilon == eps for f in families)
    families.sort(key=lambda f: (f.h, f.d, f.t.a, f.t.b))
    return families


def _deduced_from_seen(t: LinPoly, r: QuadPoly, seen) -> bool:
    a = abs(t.a)
    for width, bases in seen.items():
        if a % width:
            continue
        for base in bases:
            if is_deduced((t, r), base) is not None:
                return True
    return False


def companion(f: Family) -> Family:
    """The family with trace ``eps - t``: same ``r``, ``h`` and ``d``."""
    eps = f.epsilon
    return Family(f.k, f.h, f.d, eps - f.t, f.r, f.q - f.t * 2 + eps)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class FamilyReport:
    family: Family
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def __str__(self) -> str:
        if self.ok:
            return f"PASS {self.family}"
        bad = "; ".join(f"{c.name}: {c.detail}" for c in self.failures)
        return f"FAIL {self.family} -- {bad}"


def _first_mismatch(lhs: QuadPoly, rhs: QuadPoly) -> str:
    for deg, (x, y) in enumerate(zip(lhs.coeffs(), rhs.coeffs())):
        if x != y:
            return f"coefficient of x^{deg}: {x} != {y}"
    return ""


def verify_family(f: Family) -> FamilyReport:
    """Check every family identity and predicate; never raises on bad data."""
    report = FamilyReport(f)
    add = report.checks.append

    try:
        phi = phi_shifted(f.k, f.t)
    except ValueError as exc:
        add(CheckResult("embedding degree", False, str(exc)))
        return report

    lhs = f.r * f.d
    add(CheckResult("Phi_k(t-1) = d*r", phi == lhs, _first_mismatch(phi, lhs)))
    expect_q = f.r * f.h + f.t - 1
    add(CheckResult("q = h*r + t - 1", f.q == expect_q, _first_mismatch(f.q, expect_q)))
    add(CheckResult("4h >= d", 4 * f.h >= f.d, f"4h={4 * f.h}, d={f.d}"))
    add(CheckResult("d = content(Phi_k(t-1))", f.d == content(phi), f"content={content(phi)}"))

    if f.r.c2 == 0 or f.r.is_zero():
        add(CheckResult("r irreducible", False, "r is not quadratic"))
    else:
        add(CheckResult("r irreducible", is_irreducible_quadratic(f.r), f"disc={f.r.discriminant}"))
        add(CheckResult("content(r) = 1", content(f.r) == 1, f"content={content(f.r)}"))
    if f.q.c2 == 0 or f.q.is_zero():
        add(CheckResult("q irreducible", False, "q is not quadratic"))
    else:
        add(CheckResult("q irreducible", is_irreducible_quadratic(f.q), f"disc={f.q.discriminant}"))
        add(CheckResult("value_gcd(q) = 1", value_gcd(f.q) == 1, f"value_gcd={value_gcd(f.q)}"))
    if not (f.q.is_zero() or f.r.is_zero()):
        fd = fixed_divisor(f.q, f.r)
        add(CheckResult("q*r has no fixed divisor", fd == 1, f"every q(x)*r(x) divisible by {fd}"))
    return report


def real_cofactor(q: QuadPoly, t: LinPoly, k: int) -> tuple[int, QuadPoly]:
    """True cofactor of ``n = q + 1 - t`` once the fixed divisor of ``n`` is removed.

    Returns ``(h_true, r_primitive)`` with ``n == h_true * r_primitive`` and
    ``value_gcd(r_primitive) == 1``.
    """
    epsilon_for(k)
    n = q + 1 - t
    if n.c2 == 0 or not is_irreducible_quadratic(n):
        raise ValueError("not a near-prime family")
    c = content(n)
    r_prim = n // c
    extra = value_gcd(r_prim)
    if extra != 1:
        # a fixed prime divisor not visible in the coefficients; r(x)/extra is
        # integer-valued but has rational coefficients
        raise ValueError(f"r has fixed divisor {extra} beyond its content")
    return c, r_prim


def family_classes(k: int, h_max: int) -> list[tuple[int, LinPoly, QuadPoly]]:
    """Primitive ``(d, t, r)`` classes met by :func:`generate` before any q filter."""
    out = []
    seen: dict[int, list[tuple[LinPoly, QuadPoly]]] = {}
    for width in range(1, 4 * h_max + 1):
        for a in (width, -width):
            for b in range(width):
                t = LinPoly(a, b)
                d, r = split_d_r(k, t)
                if _deduced_from_seen(t, r, seen):
                    continue
                seen.setdefault(width, []).append((t, r))
                out.append((d, t, r))
    return out
