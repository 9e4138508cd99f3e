"""Reference family list shipped as test data.

Rows are kept exactly as printed, misprints included, together with a map
of corrected fields. ``verify-table`` audits the printed rows; the
corrected rows are what the generator is compared against.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .families import Family, FamilyReport, are_equivalent, split_d_r, verify_family
from .intpoly import parse_lin, parse_poly


@dataclass(frozen=True)
class ReferenceRow:
    id: str
    k: int
    h: int
    q: str
    r: str
    t: str
    corrected: bool = False

    def family(self) -> Family:
        """The row as a family; ``d`` is taken from the trace."""
        t = parse_lin(self.t)
        d, _ = split_d_r(self.k, t)
        return Family(self.k, self.h, d, t, parse_poly(self.r), parse_poly(self.q))


@lru_cache(maxsize=1)
def _load() -> dict:
    text = resources.files("mntgen.data").joinpath("reference_families.json").read_text()
    return json.loads(text)


def printed_rows() -> list[ReferenceRow]:
    return [ReferenceRow(r["id"], r["k"], r["h"], r["q"], r["r"], r["t"]) for r in _load()["rows"]]


def corrected_rows() -> list[ReferenceRow]:
    fixes = _load()["corrections"]
    out = []
    for row in _load()["rows"]:
        fix = fixes.get(row["id"])
        if fix:
            merged = {**row, **fix}
            out.append(ReferenceRow(row["id"], row["k"], row["h"], merged["q"], merged["r"], merged["t"], True))
        else:
            out.append(ReferenceRow(row["id"], row["k"], row["h"], row["q"], row["r"], row["t"]))
    return out


def audit(rows: list[ReferenceRow] | None = None) -> list[tuple[ReferenceRow, FamilyReport]]:
    rows = printed_rows() if rows is None else rows
    return [(row, verify_family(row.family())) for row in rows]


def find_equivalent(row: ReferenceRow, families: list[Family]) -> Family | None:
    """The generated family equivalent to ``row`` (same k, h, and t, r, q up to x -> +-x + v)."""
    target = row.family()
    for fam in families:
        if are_equivalent(target, fam):
            return fam
    return None
