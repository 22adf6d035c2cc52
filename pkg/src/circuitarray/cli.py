"""Command-line entry point: ``circuitarray {array,reduce,recur,audit,tables}``.

Exit codes: 0 success, 2 invalid arguments, 3 inconclusive recurrence mining,
4 resource exhaustion (partial audit results are written first).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from .algebra import AlgebraError, format_rational
from .arrays import ArrayError, build_cm_array, build_cx_array, build_numeric_array
from .audit import AuditConfig, AuditResult, render_ledger, run_audit
from .grid import GridError, GridLabeling, make_all_one_grid, reduce_times
from .oracle import reduce_with_tails
from .recurrence import ExactSequence, RecurrenceError, mine_annihilator, powers_of_nine_factorization

log = logging.getLogger("circuitarray")

EXIT_INVALID = 2
EXIT_INCONCLUSIVE = 3
EXIT_RESOURCES = 4
OUTPUT_ENV = "CIRCUITARRAY_OUTPUT_DIR"


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonnegative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def _assignment(items) -> dict[str, Fraction]:
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise UsageError(f"assignment must look like NAME=VALUE, got {item!r}")
        try:
            out[name.strip()] = Fraction(value.strip())
        except ValueError:
            raise UsageError(f"cannot read {value!r} as a rational") from None
    return out


def output_dir(explicit: str | None, default: str) -> Path:
    if explicit:
        return Path(explicit)
    env = os.environ.get(OUTPUT_ENV)
    return Path(env) if env else Path(default)


def _emit(text: str, path: str | None) -> None:
    if path:
        target = Path(path)
        if not target.is_absolute() and os.environ.get(OUTPUT_ENV):
            target = Path(os.environ[OUTPUT_ENV]) / target
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text)
        log.info("wrote %s", target)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------


def build_table(variant: str, max_j: int, max_row: int | None = None, grid_oracle: bool = False):
    if variant == "c":
        return build_numeric_array(max_j, use_grid_oracle=grid_oracle, max_row=max_row)
    if grid_oracle:
        raise UsageError("--grid-oracle applies only to the numeric array")
    if variant == "cx":
        return build_cx_array(max_j, max_row=max_row)
    return build_cm_array(3 if max_row is None else max_row, max_j)


def cmd_array(args) -> int:
    fmt = args.format
    if fmt is None:
        suffix = Path(args.output).suffix.lstrip(".") if args.output else ""
        fmt = suffix if suffix in ("json", "csv", "md") else "json"
    table = build_table(args.variant, args.max_j, args.max_row, args.grid_oracle)
    _emit(table.render(fmt), args.output)
    return 0


def cmd_reduce(args) -> int:
    if args.input:
        grid = GridLabeling.from_json(json.loads(Path(args.input).read_text()))
    elif args.n:
        grid = make_all_one_grid(args.n)
    else:
        raise UsageError("give --n or --input")
    if args.times > grid.n - 1:
        raise UsageError(f"a {grid.n}-grid can be reduced at most {grid.n - 1} times, asked for {args.times}")
    tails_history = []
    if args.with_tails:
        for _ in range(args.times):
            grid, tails = reduce_with_tails(grid)
            tails_history.append(tails)
    else:
        grid = reduce_times(grid, args.times)
    assignment = _assignment(args.assign)
    if assignment:
        grid = grid.map_values(lambda v: v if isinstance(v, Fraction) else v.evaluate(assignment))
    data = grid.to_json()
    if args.with_tails:
        def fmt(v):
            if isinstance(v, Fraction):
                return format_rational(v)
            return format_rational(v.evaluate(assignment)) if assignment else v.to_json()

        data["tails"] = [
            {"step": k + 1, "top": fmt(t[0]), "bottom_left": fmt(t[1]), "bottom_right": fmt(t[2])}
            for k, t in enumerate(tails_history)
        ]
    _emit(json.dumps(data, indent=2) + "\n", args.output)
    return 0


def cmd_recur(args) -> int:
    seq = ExactSequence.parse(Path(args.input).read_text())
    if args.drop_prefix:
        if args.drop_prefix >= len(seq):
            raise UsageError(f"cannot drop {args.drop_prefix} of {len(seq)} terms")
        seq = seq.drop(args.drop_prefix)
    max_order = args.max_order
    cap = (len(seq) - 2) // 2
    if max_order > cap:
        log.warning("only %d terms: lowering maxOrder from %d to %d", len(seq), max_order, cap)
        max_order = cap
    if max_order < 0:
        raise UsageError("need at least 2 terms to mine a recurrence")
    res = mine_annihilator(seq, max_order)
    if not res.conclusive:
        print(f"inconclusive: no annihilator of order <= {max_order} fits {len(seq)} terms")
        return EXIT_INCONCLUSIVE
    op = res.operator
    fact = powers_of_nine_factorization(op, args.k_max)
    print(f"annihilator: {op.to_text()}")
    print(f"factored: {op.factored_text()}")
    print(f"nine-power: {fact.to_text()}")
    print(f"nine-power complete: {'yes' if fact.full_success else 'no'}")
    print(f"held-out terms verified: {res.held_out} of {len(seq)} ({'unique fit' if res.unique_fit else 'full-sequence fit'})")
    return 0


def _write_audit(result: AuditResult, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "verdict.json").write_text(result.report.dumps())
    (out / "ledger.md").write_text(render_ledger(result))
    log.info("wrote %s and %s", out / "verdict.json", out / "ledger.md")


def cmd_audit(args) -> int:
    config = AuditConfig(c_max=args.c_max, max_order=args.max_order, k_max=args.k_max, extended=args.extended)
    out = output_dir(args.out, "audit-out")
    result = AuditResult(config)
    try:
        run_audit(config, progress=log.info, result=result)
    except (MemoryError, RecursionError) as exc:
        log.error("resource exhaustion: %s; writing partial results", type(exc).__name__)
        _write_audit(result, out)
        return EXIT_RESOURCES
    _write_audit(result, out)
    counts = {s: len([v for v in result.report.verdicts if v.status == s]) for s in ("pass", "fail", "reference-discrepancy", "inconclusive")}
    print(" ".join(f"{k}={v}" for k, v in counts.items()))
    return 0


GOLDEN_ARRAYS = (("c", 4), ("cx", 4), ("cm", 4))
GOLDEN_GRIDS = ((3, 1), (6, 2))


def cmd_tables(args) -> int:
    out = output_dir(args.out, "golden")
    out.mkdir(parents=True, exist_ok=True)
    for variant, max_j in GOLDEN_ARRAYS:
        table = build_table(variant, max_j)
        for fmt in ("json", "md", "csv"):
            (out / f"array_{variant}_j{max_j}.{fmt}").write_text(table.render(fmt))
    for n, times in GOLDEN_GRIDS:
        grid = reduce_times(make_all_one_grid(n), times)
        (out / f"reduce_n{n}_t{times}.json").write_text(grid.dumps() + "\n")
    result = AuditResult(AuditConfig())
    run_audit(result.config, progress=log.info, result=result)
    _write_audit(result, out)
    print(f"golden files written to {out}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="circuitarray", description="Exact circuit arrays of triangular resistor grids.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("array", help="build a circuit array")
    a.add_argument("variant", choices=("c", "cx", "cm"))
    a.add_argument("--max-j", type=_positive, required=True)
    a.add_argument("--max-row", type=_nonnegative, default=None)
    a.add_argument("--format", choices=("json", "csv", "md"), default=None, help="default: from --output suffix, else json")
    a.add_argument("--output", "-o", default=None, help="file to write (default stdout)")
    a.add_argument("--grid-oracle", action="store_true", help="numeric array by direct grid reduction")
    a.set_defaults(func=cmd_array)

    r = sub.add_parser("reduce", help="reduce an all-one (or given) grid")
    r.add_argument("--n", type=_positive, default=None)
    r.add_argument("--input", default=None, help="grid JSON to reduce instead of an all-one grid")
    r.add_argument("--times", type=_nonnegative, default=1)
    r.add_argument("--with-tails", action="store_true")
    r.add_argument("--assign", action="append", metavar="NAME=VALUE", help="evaluate symbolic labels")
    r.add_argument("--output", "-o", default=None)
    r.set_defaults(func=cmd_reduce)

    m = sub.add_parser("recur", help="mine the minimal annihilator of a sequence file")
    m.add_argument("input", help="one term per line")
    m.add_argument("--max-order", type=_nonnegative, default=12)
    m.add_argument("--k-max", type=_nonnegative, default=8)
    m.add_argument("--drop-prefix", type=_nonnegative, default=0, help="skip this many leading terms")
    m.set_defaults(func=cmd_recur)

    au = sub.add_parser("audit", help="run every check and write verdict.json and ledger.md")
    au.add_argument("--c-max", type=_positive, default=4)
    au.add_argument("--max-order", type=_positive, default=12)
    au.add_argument("--k-max", type=_nonnegative, default=8)
    au.add_argument("--extended", action="store_true", help="also mine weak-form rows 6 and 7 (about 65 columns)")
    au.add_argument("--out", default=None, help=f"output directory (default ${OUTPUT_ENV} or ./audit-out)")
    au.set_defaults(func=cmd_audit)

    t = sub.add_parser("tables", help="regenerate the golden files")
    t.add_argument("--out", default=None, help=f"output directory (default ${OUTPUT_ENV} or ./golden)")
    t.set_defaults(func=cmd_tables)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, GridError, ArrayError, AlgebraError, RecurrenceError, FileNotFoundError) as exc:
        print(f"circuitarray: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
