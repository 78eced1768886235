"""Command-line front end.

Exit codes: 0 analysis completed, 1 formula/oracle disagreement, 2 input
error (including families with no claims to verify), 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .instances import BudgetExhausted, InstanceError, load_instance, random_instance
from .lattice import GeometryError
from .report import EXIT_BUDGET, EXIT_INPUT, analyze, render_text, verify
from .theorems import NotEssentialError, e1_table


def _emit(report, fmt: str) -> None:
    sys.stdout.write(report.to_json() if fmt == "json" else render_text(report))


def cmd_analyze(args) -> int:
    inst = load_instance(args.file)
    report = analyze(inst, seed=args.seed, engine=args.engine, oracle=not args.no_oracle, timing=args.timing)
    _emit(report, args.format)
    return report.exit_code


def cmd_verify(args) -> int:
    inst = load_instance(args.file)
    report = verify(inst, args.seed, args.trials, engine=args.engine, timing=args.timing)
    _emit(report, args.format)
    return report.exit_code


def cmd_random(args) -> int:
    inst = random_instance(args.n, args.max_coord, args.seed)
    text = json.dumps(inst.to_json(), sort_keys=True) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return 0


def cmd_e1(args) -> int:
    inst = load_instance(args.file)
    table = e1_table(inst.family)
    if args.format == "json":
        payload = {"n": table.n, "entries": [list(c) for c in table.entries], "indexing": "entries[p][q]"}
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stdout.write(table.render() + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toricodim",
        description="Codimension in the critical degree for essential families of lattice polytopes.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["json", "text"], default="text")
        p.add_argument("--engine", choices=["auto", "bareiss", "flint"], default="auto",
                       help="exact rank engine for the oracle")
        p.add_argument("--timing", action="store_true",
                       help="record wall time in the report (breaks byte-identical output)")

    p = sub.add_parser("analyze", help="bounds, formulas, E_1 table and optional oracle")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=None, help="generic seed (overrides the instance)")
    p.add_argument("--no-oracle", action="store_true")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="check the formulas against independent generic draws")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=5)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("random", help="write a random essential family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-coord", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("e1-table", help="print the E_1 dimension table")
    p.add_argument("file")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.set_defaults(func=cmd_e1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, GeometryError, NotEssentialError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
