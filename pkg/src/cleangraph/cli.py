"""Command-line front end.

Exit codes: 0 agreement, 1 usage or invalid input, 2 a closed form
disagrees with its oracle, 3 a size cap was exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys

from .graph import EXPORT_FORMATS, SizeLimitError, build_cl2, export, vertex_cap
from .matching import (
    DEFAULT_MATCHING_CAP,
    construct_perfect_matching,
    matching_csv,
    maximum_matching,
)
from .report import analyze, regenerate_tables, render_tables, rows_to_csv, scan_rows

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DISAGREE = 2
EXIT_CAP = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _on_off(text: str) -> bool:
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return text == "on"


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cleangraph", description="Wiener index, diameter and matching number of Cl2(Z_n)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="closed forms and oracles for one n")
    a.add_argument("n", type=int)
    a.add_argument("--oracle", type=_on_off, default=True, metavar="on|off")
    a.add_argument("--json", action="store_true", help="emit the report as JSON")
    a.add_argument("--cap", type=int, default=None, help="vertex cap for graph construction and BFS")
    a.add_argument("--matching-cap", type=int, default=DEFAULT_MATCHING_CAP)

    s = sub.add_parser("scan", help="CSV row per n over a range")
    s.add_argument("n_min", type=int)
    s.add_argument("n_max", type=int)
    s.add_argument("-o", "--output", required=True)
    s.add_argument("-j", "--workers", type=int, default=1)
    s.add_argument("--cap", type=int, default=None)
    s.add_argument("--matching-cap", type=int, default=DEFAULT_MATCHING_CAP)

    t = sub.add_parser("tables", help="regenerate Table 1, Table 2, the corollary and Figure 3 data")
    t.add_argument("--errata", action="store_true", help="list printed-vs-computed mismatches")

    e = sub.add_parser("export", help="write the graph or a matching to a file")
    e.add_argument("n", type=int)
    e.add_argument("--format", required=True, choices=EXPORT_FORMATS + ("matching", "max-matching"))
    e.add_argument("-o", "--output", default="-")
    e.add_argument("--cap", type=int, default=None)
    e.add_argument("--zero-block", action="store_true", help="build the full Cl(Z_n)")
    return p


def _cmd_analyze(args) -> int:
    if args.n < 2:
        print(f"cleangraph: n must be >= 2, got {args.n}", file=sys.stderr)
        return EXIT_USAGE
    try:
        rep = analyze(args.n, oracle=args.oracle, cap=args.cap, matching_cap=args.matching_cap)
    except SizeLimitError as exc:
        print(f"cleangraph: {exc}", file=sys.stderr)
        return EXIT_CAP
    sys.stdout.write(rep.to_json() if args.json else rep.to_text())
    for phase, secs in rep.timings.items():
        print(f"time {phase}: {secs:.3f}s", file=sys.stderr)
    return EXIT_OK if rep.all_agree else EXIT_DISAGREE


def _cmd_scan(args) -> int:
    if args.n_min < 2 or args.n_max < args.n_min:
        print(f"cleangraph: need 2 <= min <= max, got {args.n_min} {args.n_max}", file=sys.stderr)
        return EXIT_USAGE
    rows = scan_rows(args.n_min, args.n_max, workers=args.workers, cap=args.cap,
                     matching_cap=args.matching_cap)
    text = rows_to_csv(rows)
    try:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"cleangraph: cannot write {args.output}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_DISAGREE if any(r["agree"] == "false" for r in rows) else EXIT_OK


def _cmd_tables(args) -> int:
    sys.stdout.write(render_tables(regenerate_tables(with_oracle=args.errata), errata=args.errata))
    return EXIT_OK


def _cmd_export(args) -> int:
    if args.n < 2:
        print(f"cleangraph: n must be >= 2, got {args.n}", file=sys.stderr)
        return EXIT_USAGE
    try:
        g = build_cl2(args.n, include_zero_block=args.zero_block,
                      cap=vertex_cap() if args.cap is None else args.cap)
        if args.format == "matching":
            data = matching_csv(g, construct_perfect_matching(g)).encode()
        elif args.format == "max-matching":
            data = matching_csv(g, maximum_matching(g)).encode()
        else:
            data = export(g, args.format)
    except SizeLimitError as exc:
        print(f"cleangraph: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        print(f"cleangraph: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return EXIT_OK
    try:
        with open(args.output, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        print(f"cleangraph: cannot write {args.output}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        handler = {"analyze": _cmd_analyze, "scan": _cmd_scan,
                   "tables": _cmd_tables, "export": _cmd_export}[args.command]
        return handler(args)
    except ValueError as exc:
        # bad cap environment variable and similar input problems
        print(f"cleangraph: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
