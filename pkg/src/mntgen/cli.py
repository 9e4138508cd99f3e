"""Command-line interface.

Exit status: 0 on success, 1 on invalid input, 2 when an internal
invariant check fails (the violated invariant is printed on stderr).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .arith import IndeterminateSquarefree
from .counting import candidate_total, n_d_table
from .families import Family, generate, verify_family
from .pell import class_representatives, orbit, reduce, solve_bounded
from .reference import audit, corrected_rows
from .search import CSV_FIELDS, InvalidInstance, pell_search, sweep
from .stats import census_detail, density_profile

log = logging.getLogger("mntgen")


class InvariantViolation(RuntimeError):
    def __init__(self, name: str, detail: str = ""):
        super().__init__(f"{name}: {detail}" if detail else name)
        self.name = name


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _embedding_degree(text: str) -> int:
    value = int(text)
    if value not in (3, 4, 6):
        raise argparse.ArgumentTypeError("k must be 3, 4 or 6")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mntgen", description="Near prime-order MNT curve families.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_output(p, formats=("json", "csv", "table"), default="csv"):
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--output", "-o", help="write to this file instead of stdout")

    def with_family(p):
        p.add_argument("--family", help="family as JSON text or a path to a JSON file")
        p.add_argument("--family-index", type=int, default=0, help="index into a list or generated families")
        p.add_argument("--k", type=_embedding_degree)
        p.add_argument("--h", type=_positive)

    p = sub.add_parser("generate", help="all families up to a cofactor bound")
    p.add_argument("--k", type=_embedding_degree, required=True)
    p.add_argument("--hmax", type=_positive, required=True)
    with_output(p)

    p = sub.add_parser("count", help="N_d table and candidate total")
    p.add_argument("--k", type=_embedding_degree, required=True)
    p.add_argument("--h", type=_positive, required=True)
    with_output(p)

    p = sub.add_parser("reduce-pell", help="Pell reduction of one family")
    with_family(p)
    with_output(p, default="json")

    p = sub.add_parser("solve-pell", help="solve y^2 - g*m^2 = f")
    p.add_argument("--g", type=_positive, required=True)
    p.add_argument("--f", type=int, required=True)
    p.add_argument("--limit", type=_positive, required=True, help="largest |y| reported")
    with_output(p)

    p = sub.add_parser("search", help="concrete curve parameters from a family")
    with_family(p)
    p.add_argument("--xmin", type=int, required=True)
    p.add_argument("--xmax", type=int, required=True)
    p.add_argument("--dmin", type=_positive, default=1)
    p.add_argument("--dmax", type=_positive, required=True)
    p.add_argument("--mode", choices=("sweep", "pell"), default="sweep")
    p.add_argument("--jobs", type=_positive, default=1)
    with_output(p)

    p = sub.add_parser("stats", help="local densities, Euler constants and census")
    with_family(p)
    p.add_argument("--z", type=_positive, required=True, help="discriminant bound")
    p.add_argument("--xmax", type=_positive, required=True, help="seed bound |x| <= xmax")
    p.add_argument("--euler-bound", type=_positive, default=10**5, help="truncation prime bound P")
    p.add_argument("--checkpoints", type=int, default=10, help="number of (z, E(z)) checkpoints")
    p.add_argument("--checkpoints-csv", help="also write the checkpoints to this CSV file")
    p.add_argument("--jobs", type=_positive, default=1)
    with_output(p, formats=("json", "csv"), default="json")

    p = sub.add_parser("verify-table", help="audit the shipped reference family list")
    p.add_argument("--builtin", action="store_true", required=True)
    p.add_argument("--corrected", action="store_true", help="audit the corrected rows instead")
    with_output(p, default="table")
    return parser


# --------------------------------------------------------------------------
# helpers


def _poly_cell(poly) -> str:
    return "[" + ", ".join(str(c) for c in poly.coeffs()) + "]"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _table(header, rows) -> str:
    cells = [list(map(str, header))] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines) + "\n"


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _load_family(args) -> Family:
    if args.family:
        text = args.family.strip()
        if not text.startswith(("{", "[")):
            try:
                text = Path(text).read_text()
            except OSError as exc:
                raise UsageError(f"cannot read family file: {exc}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"invalid family JSON: {exc}") from None
        if isinstance(data, list):
            data = _pick(data, args.family_index)
        try:
            fam = Family.from_dict(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"invalid family record: {exc}") from None
    elif args.k and args.h:
        fams = [f for f in generate(args.k, args.h) if f.h == args.h]
        fam = _pick(fams, args.family_index)
    else:
        raise UsageError("give --family, or --k and --h with --family-index")
    report = verify_family(fam)
    if not report.ok:
        bad = report.failures[0]
        raise UsageError(f"family fails '{bad.name}' ({bad.detail})")
    return fam


def _pick(items, index):
    if not -len(items) <= index < len(items):
        raise UsageError(f"family index {index} out of range (0..{len(items) - 1})")
    return items[index]


def _check_reduction(fam: Family, inst) -> None:
    for x in range(-3, 4):
        lhs = inst.y_of(x) ** 2 + inst.w2
        rhs = inst.u * (4 * fam.q(x) - fam.t(x) ** 2)
        if lhs != rhs:
            raise InvariantViolation("(w0*x + w1)^2 + w2 = u*(4q - t^2)", f"fails at x={x}")
    if inst.f != -inst.w2:
        raise InvariantViolation("f = -w2")


# --------------------------------------------------------------------------
# subcommands


def cmd_generate(args) -> None:
    fams = generate(args.k, args.hmax)
    for fam in fams:
        report = verify_family(fam)
        if not report.ok:
            raise InvariantViolation(report.failures[0].name, str(fam))
    if args.format == "json":
        _emit(args, _json([f.to_dict() for f in fams]))
        return
    header = ["k", "h", "q", "r", "t", "d"]
    if args.format == "csv":
        rows = [[f.k, f.h, _poly_cell(f.q), _poly_cell(f.r), _poly_cell(f.t), f.d] for f in fams]
        _emit(args, _csv(header, rows))
    else:
        rows = [[f.k, f.h, f.q, f.r, f.t, f.d] for f in fams]
        _emit(args, _table(header, rows))


def cmd_count(args) -> None:
    rows = n_d_table(args.k, args.h)
    for d, formula, oracle in rows:
        if formula != oracle:
            raise InvariantViolation("N_d formula = N_d oracle", f"d={d}: {formula} != {oracle}")
    total = candidate_total(args.k, args.h)
    if args.format == "json":
        _emit(args, _json({"k": args.k, "h": args.h, "N_d": {str(d): n for d, n, _ in rows}, "total": total}))
        return
    body = [[d, n] for d, n, _ in rows] + [["total", total]]
    text = _csv(["d", "N_d"], body) if args.format == "csv" else _table(["d", "N_d"], body)
    _emit(args, text)


def cmd_reduce_pell(args) -> None:
    fam = _load_family(args)
    inst = reduce(fam)
    _check_reduction(fam, inst)
    record = {"w0": inst.w0, "w1": inst.w1, "w2": inst.w2, "u": inst.u, "f": inst.f}
    if args.format == "json":
        _emit(args, _json(record))
    elif args.format == "csv":
        _emit(args, _csv(list(record), [list(record.values())]))
    else:
        _emit(args, _table(list(record), [list(record.values())]))


def cmd_solve_pell(args) -> None:
    if args.f == 0:
        raise UsageError("f must be nonzero")
    try:
        reps = class_representatives(args.g, args.f)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sols = set()
    for c in reps:
        for y, m in orbit(c, args.limit):
            if c.y * c.y - args.g * c.m * c.m != args.f or y * y - args.g * m * m != args.f:
                raise InvariantViolation("y^2 - g*m^2 = f", f"({y}, {m})")
            sols.add((y, m))
    if set(solve_bounded(args.g, args.f, args.limit)) != {(y, m) for y, m in sols if y >= 0 and m >= 0}:
        raise InvariantViolation("orbit solutions = bounded solutions")
    rows = [["class", c.y, c.m] for c in reps] + [["solution", y, m] for y, m in sorted(sols)]
    if args.format == "json":
        _emit(args, _json({
            "g": args.g,
            "f": args.f,
            "classes": [{"y": c.y, "m": c.m} for c in reps],
            "solutions": [{"y": y, "m": m} for y, m in sorted(sols)],
        }))
    elif args.format == "csv":
        _emit(args, _csv(["kind", "y", "m"], rows))
    else:
        _emit(args, _table(["kind", "y", "m"], rows))


def cmd_search(args) -> None:
    fam = _load_family(args)
    if args.xmax < args.xmin:
        raise UsageError("--xmax must be >= --xmin")
    if args.mode == "sweep":
        found = sweep(fam, args.xmin, args.xmax, args.dmax, d_min=args.dmin, jobs=args.jobs)
    else:
        inst = reduce(fam)
        y_limit = max(abs(inst.y_of(args.xmin)), abs(inst.y_of(args.xmax)))
        found = pell_search(fam, args.dmin, args.dmax, y_limit, x_range=(args.xmin, args.xmax))
    for c in found:
        c.validate()
    records = [c.to_dict() for c in found]
    if args.format == "json":
        _emit(args, _json(records))
        return
    rows = [[r[k] for k in CSV_FIELDS] for r in records]
    _emit(args, _csv(CSV_FIELDS, rows) if args.format == "csv" else _table(CSV_FIELDS, rows))


def cmd_stats(args) -> None:
    fam = _load_family(args)
    profile = density_profile(fam, args.euler_bound)
    expect = (4 * fam.q - fam.t * fam.t) * profile.u
    if profile.delta != expect:
        raise InvariantViolation("Delta = u*(4q - t^2)")
    result = census_detail(fam, args.z, args.xmax, jobs=args.jobs)
    n = max(1, args.checkpoints)
    zs = sorted({max(1, args.z * i // n) for i in range(1, n + 1)})
    checkpoints = result.checkpoints(zs)
    if any(b[1] < a[1] for a, b in zip(checkpoints, checkpoints[1:])):
        raise InvariantViolation("E(z) non-decreasing in z")
    cp_text = _csv(["z", "E"], checkpoints)
    if args.checkpoints_csv:
        Path(args.checkpoints_csv).write_text(cp_text)
    if args.format == "csv":
        _emit(args, cp_text)
        return
    record = profile.to_dict()
    record["census"] = {
        "z": args.z,
        "xmax": args.xmax,
        "E": result.count,
        "indeterminate": result.indeterminate,
        "checkpoints": [list(c) for c in checkpoints],
    }
    _emit(args, _json(record))


def cmd_verify_table(args) -> None:
    from .reference import printed_rows

    rows = corrected_rows() if args.corrected else printed_rows()
    results = audit(rows)
    flagged = [(row, rep) for row, rep in results if not rep.ok]
    if args.format == "json":
        _emit(args, _json({
            "rows": len(results),
            "flagged": [
                {"id": row.id, "failures": [{"check": c.name, "detail": c.detail} for c in rep.failures]}
                for row, rep in flagged
            ],
        }))
        return
    body = []
    for row, rep in results:
        status = "ok" if rep.ok else "FLAGGED"
        detail = "; ".join(f"{c.name} ({c.detail})" for c in rep.failures)
        body.append([row.id, status, row.q, row.r, row.t, detail])
    header = ["id", "status", "q", "r", "t", "failures"]
    text = _csv(header, body) if args.format == "csv" else _table(header, body)
    if args.format == "table":
        text += f"\n{len(flagged)} of {len(results)} rows flagged\n"
    _emit(args, text)


COMMANDS = {
    "generate": cmd_generate,
    "count": cmd_count,
    "reduce-pell": cmd_reduce_pell,
    "solve-pell": cmd_solve_pell,
    "search": cmd_search,
    "stats": cmd_stats,
    "verify-table": cmd_verify_table,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        COMMANDS[args.command](args)
    except (InvariantViolation, InvalidInstance, AssertionError) as exc:
        name = getattr(exc, "name", None) or str(exc)
        print(f"invariant violated: {name}", file=sys.stderr)
        return 2
    except (UsageError, ValueError, IndeterminateSquarefree) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
