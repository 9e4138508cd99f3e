"""How many trace classes exist for a given split factor ``d``.

``N_d`` is the number of residues ``b mod d`` with ``d | Phi_k(b - 1)``;
each such residue gives one primitive trace ``d*x + b``. A closed formula
and an exhaustive oracle are both provided.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import factorize
from .families import epsilon_for, phi_k


def big_prime_of(k: int) -> int:
    """Largest prime factor of ``k``: 3 for k in {3, 6}, 2 for k = 4."""
    epsilon_for(k)
    return 2 if k == 4 else 3


@dataclass(frozen=True)
class FactoredD:
    """``d = p**u0 * prod(q_i**u_i)`` with ``p`` the largest prime of ``k``."""

    value: int
    p: int
    u0: int
    odd_factors: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    @classmethod
    def of(cls, k: int, d: int) -> FactoredD:
        if d < 1:
            raise ValueError("d must be positive")
        p = big_prime_of(k)
        fac = factorize(d)
        u0 = fac.pop(p, 0)
        return cls(d, p, u0, tuple(sorted(fac.items())))

    @property
    def s(self) -> int:
        return len(self.odd_factors)


def n_d_formula(k: int, d: int) -> int:
    fd = FactoredD.of(k, d)
    if d == 1 or d == fd.p:
        return 1
    if fd.u0 <= 1 and all(q % k == 1 for q, _ in fd.odd_factors):
        return 2**fd.s
    return 0


def n_d_oracle(k: int, d: int) -> int:
    """Count ``b in [0, d)`` with ``Phi_k(b - 1) = 0 (mod d)`` exhaustively."""
    if d < 1:
        raise ValueError("d must be positive")
    return sum(1 for b in range(d) if phi_k(k, b - 1) % d == 0)


def candidate_total(k: int, h: int) -> int:
    """Sum of ``N_d`` over ``d <= 4h``: trace classes before any filter on ``q``."""
    if h < 1:
        raise ValueError("h must be positive")
    return sum(n_d_formula(k, d) for d in range(1, 4 * h + 1))


def n_d_table(k: int, h: int) -> list[tuple[int, int, int]]:
    """Rows ``(d, N_d formula, N_d oracle)`` for ``d <= 4h``."""
    return [(d, n_d_formula(k, d), n_d_oracle(k, d)) for d in range(1, 4 * h + 1)]
