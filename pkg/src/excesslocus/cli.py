"""Command-line front end.

    excesslocus hilbert --r 2..4 --a 1 --d 1..5
    excesslocus bound --r 2 --a 1 --d 1,5 --b 2
    excesslocus check-theorem                # r <= 8, a <= 3, d_i <= 6
    excesslocus catalog --rmax 4
    excesslocus bruteforce --r 2 --d 1,1 --q 2,3,4

Exit codes: 0 success, 1 invalid input, 2 a theorem-margin failure.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import os
import sys
from typing import Sequence

from .bounds import (
    BoundReport,
    PreconditionError,
    ProblemInstance,
    Variant,
    check_grid,
    margin_grid,
    span_locus_codim_lower,
    theorem_margin_check,
)
from .catalog import quadric_pair_table
from .exactmath import hilbert_lower_bound
from .gfpoly.field import field_from_q
from .gfpoly.lab import (
    DEFAULT_SIZE_GUARD,
    enumerate_locus,
    reports_to_csv,
    reports_to_json,
)
from .gfpoly.oracles import UnsupportedOracle

WORKERS_ENV = "EXCESSLOCUS_WORKERS"

EXIT_OK, EXIT_INPUT, EXIT_MARGIN = 0, 1, 2


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2, reserved for margin failures
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def parse_range(text: str) -> list[int]:
    """``"3"``, ``"2..5"`` (inclusive) or ``"1,3,5"``."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"cannot parse range {text!r}") from None


def parse_degrees(text: str) -> tuple[int, ...]:
    try:
        degs = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"cannot parse degrees {text!r}") from None
    if list(degs) != sorted(degs):
        raise InputError(f"degrees must be given in non-decreasing order, got {text}")
    return degs


def _single(values: list[int], name: str) -> int:
    if len(values) != 1:
        raise InputError(f"--{name} must be a single value here")
    return values[0]


def _timestamp(args) -> str | None:
    if args.no_timestamp:
        return None
    return _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()


def _render_text(rows: list[dict]) -> str:
    if not rows:
        return "(no rows)\n"
    cols = list(rows[0])
    cells = [[str(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _render_csv(rows: list[dict], timestamp: str | None) -> str:
    buf = io.StringIO()
    if rows:
        cols = list(rows[0]) + (["generated_at"] if timestamp else [])
        writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({**row, **({"generated_at": timestamp} if timestamp else {})})
    return buf.getvalue()


def _render(rows: list[dict], args, payload: dict | None = None) -> str:
    ts = _timestamp(args)
    if args.format == "json":
        doc = payload if payload is not None else {"rows": rows}
        if ts:
            doc = {**doc, "generated_at": ts}
        return json.dumps(doc, indent=2) + "\n"
    if args.format == "csv":
        return _render_csv(rows, ts)
    return _render_text(rows)


def _emit(text: str, args) -> None:
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands -------------------------------------------------------------


def cmd_hilbert(args) -> int:
    rows = []
    for r in parse_range(args.r):
        for a in parse_range(args.a):
            for d in parse_range(args.d):
                try:
                    h = hilbert_lower_bound(r, a, d)
                except ValueError as exc:
                    raise InputError(str(exc)) from None
                rows.append({"r": r, "a": a, "d": d, "h": h})
    if not rows:
        raise InputError("empty hilbert grid")
    _emit(_render(rows, args), args)
    return EXIT_OK


def cmd_bound(args) -> int:
    inst = ProblemInstance(args.r, args.a, parse_degrees(args.d))
    rep = span_locus_codim_lower(inst, args.b, Variant(args.variant), args.method)
    rec = rep.to_record()
    if args.format == "text":
        _emit(
            f"bound = {rep.lower_bound}  (variant {rep.variant.label}, "
            f"argmin ({rec['argmin']}))\n",
            args,
        )
    else:
        _emit(_render([rec], args, payload=rec), args)
    return EXIT_OK


def cmd_check_theorem(args) -> int:
    if args.d:
        inst = ProblemInstance(
            _single(parse_range(args.r), "r"), _single(parse_range(args.a), "a"), parse_degrees(args.d)
        )
        rep = theorem_margin_check(inst)
        rows = rep.to_records()
        payload = {"instances": 1, "checks": len(rows), "passed": rep.passed, "rows": rows}
        _emit(_render(rows, args, payload), args)
        return EXIT_OK if rep.passed else EXIT_MARGIN

    instances = margin_grid(parse_range(args.r), parse_range(args.a), parse_range(args.d_range))
    summary = check_grid(instances, workers=args.workers)
    failures = [row for rep in summary.failures for row in rep.to_records() if not row["pass"]]
    payload = {
        "instances": summary.instances,
        "checks": summary.checks,
        "passed": summary.passed,
        "failures": failures,
    }
    if args.format == "text":
        status = "PASS" if summary.passed else "FAIL"
        text = f"{status}: {summary.instances} instances, {summary.checks} (instance, b) checks\n"
        if failures:
            text += _render_text(failures)
        _emit(text, args)
    else:
        rows = [{k: v for k, v in payload.items() if k != "failures"}]
        _emit(_render(failures if args.format == "csv" and failures else rows, args, payload), args)
    return EXIT_OK if summary.passed else EXIT_MARGIN


def cmd_catalog(args) -> int:
    rows = [row.to_record() for row in quadric_pair_table(args.rmax)]
    _emit(_render(rows, args), args)
    return EXIT_OK


def cmd_bruteforce(args) -> int:
    degrees = parse_degrees(args.d)
    if args.sampled and args.seed is None:
        raise InputError("--sampled needs --seed")
    reports = []
    for q in parse_range(args.q):
        try:
            field = field_from_q(q)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        reports.append(
            enumerate_locus(
                args.r,
                degrees,
                args.a,
                field,
                mode="sampled" if args.sampled else "exhaustive",
                seed=args.seed,
                n=args.n if args.sampled else None,
                m_max=args.m_max,
                size_guard=args.size_guard,
                workers=args.workers,
            )
        )
    ts = _timestamp(args)
    if args.format == "json":
        _emit(reports_to_json(reports, ts), args)
    elif args.format == "csv":
        _emit(reports_to_csv(reports, ts), args)
    else:
        rows = []
        for rep in reports:
            rows.append(
                {
                    "q": rep.q,
                    "N": rep.N,
                    "total": rep.count_total,
                    "excess": rep.count_excess,
                    "line": rep.count_line,
                    "est_codim": "-" if rep.est_codim is None else f"{rep.est_codim:.4f}",
                    "line_fraction": "-" if rep.line_fraction is None else f"{rep.line_fraction:.4f}",
                    "predicted": "-" if rep.predicted_codim is None else rep.predicted_codim,
                }
            )
        _emit(_render_text(rows), args)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--no-timestamp", action="store_true", help="omit generated_at (byte-stable output)")
    common.add_argument(
        "--workers", type=int, default=_default_workers(),
        help=f"worker processes (default ${WORKERS_ENV} or 1); never changes results",
    )

    parser = _Parser(prog="excesslocus", description="Codimension bounds for excess intersection loci.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("hilbert", parents=[common], help="tabulate h_{r,a}(d)")
    p.add_argument("--r", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--d", required=True)
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("bound", parents=[common], help="span-locus codimension lower bound")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--d", required=True, help="non-decreasing degrees, e.g. 1,5")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--variant", choices=[v.value for v in Variant], default="eq")
    p.add_argument("--method", choices=("exhaustive", "dp"), default="exhaustive")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("check-theorem", parents=[common], help="margin checks over a grid")
    p.add_argument("--r", default="2..8")
    p.add_argument("--a", default="1..3")
    p.add_argument("--d", help="a single degree tuple (needs single --r and --a)")
    p.add_argument("--d-range", default="1..6", help="degree values for the grid")
    p.set_defaults(func=cmd_check_theorem)

    p = sub.add_parser("catalog", parents=[common], help="quadric-pair component table")
    p.add_argument("--rmax", type=int, required=True)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("bruteforce", parents=[common], help="enumerate tuples over F_q")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", required=True)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--q", default="2", help="field orders, e.g. 2,3,4")
    p.add_argument("--sampled", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--m-max", type=int)
    p.add_argument("--size-guard", type=int, default=DEFAULT_SIZE_GUARD)
    p.set_defaults(func=cmd_bruteforce)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, PreconditionError, UnsupportedOracle, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
