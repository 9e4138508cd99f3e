"""Generalized Pell equations ``y^2 - g*m^2 = f`` and the reduction of a family to one.

For a family with ``4h > d`` put ``y = w0*x + w1``. Then

    y^2 + w2 = u * (4*q(x) - t(x)^2)

so writing ``4q - t^2 = D*m^2`` turns the CM equation into
``y^2 - (u*D)*m^2 = -w2``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from math import gcd, isqrt

from . import _kernels
from .families import Family
from .intpoly import is_square


@dataclass(frozen=True)
class PellInstance:
    """Reduction data of one family: ``y = w0*x + w1``, ``g = u*D``, ``f = -w2``."""

    w0: int
    w1: int
    w2: int
    u: int
    f: int
    family: Family | None = None

    def y_of(self, x: int) -> int:
        return self.w0 * x + self.w1

    def x_of(self, y: int) -> int | None:
        """``x`` with ``w0*x + w1 == y``, or None when ``y`` is off the congruence class."""
        num = y - self.w1
        if num % self.w0:
            return None
        return num // self.w0

    def oriented(self) -> PellInstance:
        """Same substitution written with ``w0 < 0`` (``y -> -y``)."""
        if self.w0 < 0:
            return self
        return replace(self, w0=-self.w0, w1=-self.w1)

    def long_form_f(self) -> int:
        """``f`` recomputed from the trace coefficients, as a cross-check of ``-w2``."""
        fam = self.family
        if fam is None:
            raise ValueError("instance has no family attached")
        h, d, eps, b = fam.h, fam.d, fam.epsilon, fam.t.b
        return self.w1**2 - ((4 * h - d) * b) ** 2 + 4 * (4 * h - d) * (b - 1) * (eps * h - d)


def reduce(fam: Family) -> PellInstance:
    """Pell data of ``fam``; requires ``4h > d``."""
    h, d, eps = fam.h, fam.d, fam.epsilon
    a, b = fam.t.a, fam.t.b
    if 4 * h == d:
        raise ValueError("degenerate Hasse boundary")
    if 4 * h < d:
        raise ValueError(f"4h < d ({4 * h} < {d})")
    w0 = a * (4 * h - d)
    w1 = b * (4 * h - d) - 2 * (eps * h - d)
    w2 = 4 * h * (4 - eps) * (eps * h - d)
    u = d * (4 * h - d)
    return PellInstance(w0, w1, w2, u, -w2, fam)


def w1_alternative(fam: Family) -> int:
    """``2h(2b - eps) - (b - 2)d``, algebraically equal to ``w1``."""
    h, d, eps, b = fam.h, fam.d, fam.epsilon, fam.t.b
    return 2 * h * (2 * b - eps) - (b - 2) * d


@lru_cache(maxsize=4096)
def fundamental_unit(g: int) -> tuple[int, int]:
    """Least ``(T, U)`` with ``T^2 - g*U^2 = 1`` from the continued fraction of sqrt(g)."""
    if g <= 0:
        raise ValueError("g must be positive")
    a0 = isqrt(g)
    if a0 * a0 == g:
        raise ValueError("not a Pell modulus: g is a perfect square")
    m, dd, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    while p * p - g * q * q != 1:
        m = dd * a - m
        dd = (g - m * m) // dd
        a = (a0 + m) // dd
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return p, q


@dataclass(frozen=True)
class PellSolutionClass:
    """One class of ``y^2 - g*m^2 = f``, represented by its member of least ``|m|``."""

    y: int
    m: int
    g: int
    f: int

    def __post_init__(self):
        if self.y * self.y - self.g * self.m * self.m != self.f:
            raise ValueError(f"({self.y}, {self.m}) does not solve y^2 - {self.g}m^2 = {self.f}")

    def contains(self, y: int, m: int) -> bool:
        return same_class(self.g, self.f, (self.y, self.m), (y, m))

    @property
    def primitive(self) -> bool:
        return gcd(self.y, self.m) == 1


def same_class(g: int, f: int, s1: tuple[int, int], s2: tuple[int, int]) -> bool:
    """Solutions differ by a unit of norm 1 (including -1)."""
    (y1, m1), (y2, m2) = s1, s2
    return (y1 * y2 - g * m1 * m2) % f == 0 and (y1 * m2 - y2 * m1) % f == 0


def nagell_bound(g: int, f: int) -> int:
    """Every class has a member with ``0 <= m`` at most this."""
    t, _ = fundamental_unit(g)
    return isqrt(abs(f) * (t + 1) // (2 * g)) + 2


def _squares_in_band(g: int, f_lo: int, f_hi: int, m_hi: int) -> list[tuple[int, int, int]]:
    """All ``(f, y, m)`` with ``y, m >= 0``, ``m <= m_hi``, ``f_lo <= f <= f_hi`` and ``y^2 - g*m^2 = f``."""
    if m_hi < 0:
        return []
    bound = max(abs(f_lo), abs(f_hi))
    if _kernels.wide_scan_fits(g, bound, m_hi):
        ms, ys = _kernels.square_hits(g, f_lo, f_hi, 0, m_hi)
        return [(y * y - g * m * m, y, m) for m, y in zip(ms.tolist(), ys.tolist())]
    out = []
    for m in range(m_hi + 1):
        v = g * m * m
        y = isqrt(max(0, v + f_lo))
        while y * y < v + f_lo:
            y += 1
        while y * y <= v + f_hi:
            out.append((y * y - v, y, m))
            y += 1
    return out


def _squares_on_lines(g: int, f: int, m_hi: int) -> list[tuple[int, int]]:
    """All ``(y, m)`` with ``y, m >= 0``, ``m <= m_hi`` and ``y^2 - g*m^2 = f``."""
    return [(y, m) for _, y, m in _squares_in_band(g, f, f, m_hi)]


def _classes_from(g: int, f: int, sols) -> list[PellSolutionClass]:
    cands = []
    for y, m in sols:
        cands.append((y, m))
        if y:
            cands.append((-y, m))
    cands.sort(key=lambda s: (s[1], -s[0]))
    reps: list[PellSolutionClass] = []
    for y, m in cands:
        if any(same_class(g, f, (c.y, c.m), (y, m)) for c in reps):
            continue
        reps.append(PellSolutionClass(y, m, g, f))
    return reps


def class_representatives(g: int, f: int, m_cap: int | None = None) -> list[PellSolutionClass]:
    """One representative per class of ``y^2 - g*m^2 = f``.

    Candidates come from a scan ``0 <= m <= nagell_bound(g, f)``; each class
    is represented by its first candidate in ``(m, -y)`` order. ``m_cap``
    truncates the scan, which keeps only classes that have a small member.
    """
    if f == 0:
        raise ValueError("f must be nonzero")
    bound = nagell_bound(g, f)
    if m_cap is not None:
        bound = min(bound, m_cap)
    return _classes_from(g, f, _squares_on_lines(g, f, bound))


def class_table(g: int, fs) -> dict[int, list[PellSolutionClass]]:
    """:func:`class_representatives` for many right-hand sides with one shared scan."""
    fs = sorted(set(fs))
    if not fs or 0 in fs:
        raise ValueError("right-hand sides must be nonzero")
    bounds = {f: nagell_bound(g, f) for f in fs}
    found: dict[int, list[tuple[int, int]]] = {f: [] for f in fs}
    for f, y, m in _squares_in_band(g, fs[0], fs[-1], max(bounds.values())):
        if f in found and m <= bounds[f]:
            found[f].append((y, m))
    return {f: _classes_from(g, f, found[f]) for f in fs}


def is_ambiguous(c: PellSolutionClass) -> bool:
    """True when the conjugate ``(y, -m)`` lies in the same class."""
    return (c.y * c.y + c.g * c.m * c.m) % c.f == 0 and (2 * c.y * c.m) % c.f == 0


def orbit(c: PellSolutionClass, y_limit: int) -> list[tuple[int, int]]:
    """Members ``(y, m)`` of the class ``+-(y + m*sqrt(g)) * unit^k`` with ``|y| <= y_limit``."""
    g = c.g
    t, u = fundamental_unit(g)
    out = set()
    for start in ((c.y, c.m), (-c.y, -c.m)):
        for step_t, step_u in ((t, u), (t, -u)):
            y, m = start
            prev = None
            while True:
                if abs(y) <= y_limit:
                    out.add((y, m))
                elif prev is not None and abs(y) > abs(prev):
                    break
                prev = y
                y, m = y * step_t + g * m * step_u, y * step_u + m * step_t
    return sorted(out)


def solve_bounded(g: int, f: int, y_limit: int) -> list[tuple[int, int]]:
    """All ``(y, m)`` with ``0 <= y <= y_limit``, ``m >= 0`` and ``y^2 - g*m^2 = f``.

    Uses class representatives plus unit orbits when that scan is shorter
    than scanning ``m`` straight up to the largest value allowed by
    ``y_limit``; otherwise the direct scan. Both are exhaustive.
    """
    if f == 0:
        raise ValueError("f must be nonzero")
    if is_square(g):
        return [(y, m) for y, m in _square_modulus_solutions(g, f) if 0 <= y <= y_limit and m >= 0]
    m_direct = isqrt(max(0, y_limit * y_limit - f) // g) + 1
    if _nagell_cheaper(g, f, m_direct):
        sols = set()
        for c in class_representatives(g, f):
            for y, m in orbit(c, y_limit):
                if y >= 0 and m >= 0:
                    sols.add((y, m))
        return sorted(sols)
    return sorted((y, m) for y, m in _squares_on_lines(g, f, m_direct) if y <= y_limit)


def _nagell_cheaper(g: int, f: int, m_direct: int) -> bool:
    # the continued fraction of sqrt(g) has period O(sqrt(g) log g); skip it
    # when the direct scan is already short
    if m_direct <= 4 * isqrt(g) + 64:
        return False
    return nagell_bound(g, f) < m_direct


def _square_modulus_solutions(g: int, f: int) -> list[tuple[int, int]]:
    """``(y - s*m)(y + s*m) = f`` with ``g = s^2``: finitely many solutions."""
    s = isqrt(g)
    out = set()
    af = abs(f)
    for e1 in range(1, isqrt(af) + 1):
        if af % e1:
            continue
        for lo, hi in ((e1, af // e1), (af // e1, e1)):
            for sign in (1, -1):
                a, b = sign * lo, sign * hi * (1 if f > 0 else -1)
                # a = y - s*m, b = y + s*m
                if (a + b) % 2 or (b - a) % (2 * s):
                    continue
                out.add(((a + b) // 2, (b - a) // (2 * s)))
    return sorted(out)


def solutions_in_congruence(inst: PellInstance, D: int, y_limit: int) -> list[tuple[int, int]]:
    """``(x, m)`` from solutions of ``y^2 - u*D*m^2 = f`` with ``0 <= y <= y_limit``.

    Both ``y`` and ``-y`` are tried against ``y = w0*x + w1``; ``m >= 0``.
    Sorted by ``x``.
    """
    if D < 1:
        raise ValueError("D must be positive")
    g = inst.u * D
    out = set()
    for y, m in solve_bounded(g, inst.f, y_limit):
        for yy in {y, -y}:
            x = inst.x_of(yy)
            if x is not None:
                out.add((x, m))
    return sorted(out)
