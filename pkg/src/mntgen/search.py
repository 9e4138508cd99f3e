"""Concrete curve parameters from a family.

Two independent routes produce the same instances: ``sweep`` evaluates the
family at every seed ``x`` in a box, and ``pell_search`` solves the reduced
Pell equation for every square-free ``D`` and maps solutions back to seeds.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from math import log

from .arith import IndeterminateSquarefree, is_prime, is_squarefree, primality, squarefree_part
from .families import Family, phi_k
from .pell import reduce, solutions_in_congruence

__all__ = [
    "CurveInstance",
    "InvalidInstance",
    "check_embedding_degree",
    "is_prime",
    "pell_search",
    "squarefree_part",
    "sweep",
]

log_ = logging.getLogger(__name__)


class InvalidInstance(ValueError):
    pass


def check_embedding_degree(q: int, r: int, k: int, t: int | None = None) -> bool:
    """True iff ``r | Phi_k(q)``; with ``t`` given, also requires ``r | Phi_k(t - 1)``."""
    if (k * q) % r == 0:
        raise ValueError("precondition of the embedding-degree criterion violated: r divides k*q")
    ok = phi_k(k, q) % r == 0
    if t is not None and ok != (phi_k(k, t - 1) % r == 0):
        raise InvalidInstance(f"Phi_k(q) and Phi_k(t-1) disagree modulo r={r}")
    return ok


@dataclass(frozen=True)
class CurveInstance:
    x: int
    q: int
    r: int
    t: int
    h: int
    k: int
    D: int
    m: int
    certainty: str = "prime"

    @property
    def rho(self) -> float:
        return log(self.q) / log(self.r)

    def key(self) -> tuple[int, int, int]:
        return (self.q, self.r, self.t)

    def validate(self) -> None:
        """Raise :class:`InvalidInstance` naming the first broken condition."""
        if self.q + 1 - self.t != self.h * self.r:
            raise InvalidInstance("q + 1 - t = h*r")
        if self.t == 0:
            raise InvalidInstance("t != 0")
        if self.t * self.t > 4 * self.q:
            raise InvalidInstance("Hasse bound")
        if self.r <= 3:
            raise InvalidInstance("r > 3")
        if not (is_prime(self.q) and is_prime(self.r)):
            raise InvalidInstance("q and r prime")
        if not check_embedding_degree(self.q, self.r, self.k, self.t):
            raise InvalidInstance("r | Phi_k(q)")
        if self.D * self.m * self.m != 4 * self.q - self.t * self.t:
            raise InvalidInstance("D*m^2 = 4q - t^2")
        if not is_squarefree(self.D):
            raise InvalidInstance("D square-free")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["rho"] = f"{self.rho:.6f}"
        return out


CSV_FIELDS = ["x", "q", "r", "t", "h", "k", "D", "m", "rho"]


def _instance_at(fam: Family, x: int, d_min: int, d_max: int, m_known: int | None = None):
    """The validated instance at seed ``x``, or None if a filter rejects it."""
    q, r, t = fam.q(x), fam.r(x), fam.t(x)
    if t == 0 or r <= 3 or q < 2:
        return None
    if t * t > 4 * q:
        return None
    q_kind = primality(q)
    if q_kind == "composite" or not is_prime(r):
        return None
    if (fam.k * q) % r == 0 or not check_embedding_degree(q, r, fam.k, t):
        return None
    disc = 4 * q - t * t
    if disc <= 0:
        return None
    if m_known is not None and m_known > 0:
        if disc % (m_known * m_known):
            return None
        D, m = _split_with_hint(disc, m_known)
    else:
        D, m = squarefree_part(disc)
    if not d_min <= D <= d_max:
        return None
    inst = CurveInstance(x, q, r, t, fam.h, fam.k, D, m, q_kind)
    inst.validate()
    return inst


def _split_with_hint(disc: int, m_known: int) -> tuple[int, int]:
    """Square-free split of ``disc`` when a square divisor ``m_known^2`` is already known."""
    rest = disc // (m_known * m_known)
    D, m = squarefree_part(rest)
    return D, m * m_known


def sweep(
    fam: Family,
    x_min: int,
    x_max: int,
    d_max: int,
    *,
    d_min: int = 1,
    jobs: int = 1,
    skipped: list | None = None,
) -> list[CurveInstance]:
    """Every valid instance with ``x_min <= x <= x_max`` and ``D <= d_max``, sorted by ``x``.

    Seeds whose square-free part cannot be settled are logged and, when
    ``skipped`` is given, appended to it.
    """
    if x_max < x_min:
        return []
    if jobs > 1 and x_max - x_min > 1000:
        chunks = _split_range(x_min, x_max, jobs * 4)
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(
                pool.map(_sweep_chunk, [(fam, lo, hi, d_min, d_max) for lo, hi in chunks])
            )
        out = []
        for found, skips in parts:
            out.extend(found)
            if skipped is not None:
                skipped.extend(skips)
            for x in skips:
                log_.warning("x=%d skipped: indeterminate square-free part", x)
        return sorted(out, key=lambda c: c.x)
    found, skips = _sweep_chunk((fam, x_min, x_max, d_min, d_max))
    for x in skips:
        log_.warning("x=%d skipped: indeterminate square-free part", x)
    if skipped is not None:
        skipped.extend(skips)
    return found


def _sweep_chunk(args):
    fam, lo, hi, d_min, d_max = args
    found, skips = [], []
    for x in range(lo, hi + 1):
        try:
            inst = _instance_at(fam, x, d_min, d_max)
        except IndeterminateSquarefree:
            skips.append(x)
            continue
        if inst is not None:
            found.append(inst)
    return found, skips


def _split_range(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    step = max(1, -(-(hi - lo + 1) // parts))
    return [(s, min(hi, s + step - 1)) for s in range(lo, hi + 1, step)]


def pell_search(
    fam: Family,
    d_min: int,
    d_max: int,
    y_limit: int,
    *,
    x_range: tuple[int, int] | None = None,
) -> list[CurveInstance]:
    """Instances found by solving ``y^2 - u*D*m^2 = -w2`` for square-free ``D`` in range.

    Only solutions with ``|y| <= y_limit`` are considered; ``x_range``
    additionally clips the recovered seeds. Sorted by ``x``.
    """
    inst = reduce(fam)
    found: dict[int, CurveInstance] = {}
    for D in range(max(1, d_min), d_max + 1):
        if not is_squarefree(D):
            continue
        for x, m in solutions_in_congruence(inst, D, y_limit):
            if x_range is not None and not x_range[0] <= x <= x_range[1]:
                continue
            if x in found:
                continue
            c = _from_pell(fam, x, D, m)
            if c is not None:
                found[x] = c
    return [found[x] for x in sorted(found)]


def _from_pell(fam: Family, x: int, D: int, m: int):
    q, t = fam.q(x), fam.t(x)
    if D * m * m != 4 * q - t * t:
        raise InvalidInstance("Pell solution does not satisfy D*m^2 = 4q - t^2")
    c = _instance_at(fam, x, D, D, m_known=m)
    # a square-free D is unique, so the Pell D must match
    if c is not None and c.D != D:
        return None
    return c


def y_limit_for_box(fam: Family, x_min: int, x_max: int) -> int:
    inst = reduce(fam)
    return max(abs(inst.y_of(x_min)), abs(inst.y_of(x_max)))
