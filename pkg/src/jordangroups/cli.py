"""Command-line entry point: ``jordangroups <command> ...``.

Exit codes: 0 success, 1 verification mismatch, 2 parse or construction error.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

from .constructors import build
from .errors import CorpusError, GroupError, ParseError
from .jordan import format_invariants, jordan_constant, normal_abelian_profile, subgroup_classes
from .kernel import abelian_invariants
from .suite import FORMATS, SECTIONS, run_verification

EXIT_OK, EXIT_MISMATCH, EXIT_ERROR = 0, 1, 2


def _cmd_compute(args, out) -> int:
    G = build(args.expr)
    rep = jordan_constant(G)
    if args.json:
        out.write(json.dumps(rep.as_dict(), sort_keys=True) + "\n")
        return EXIT_OK
    H, A = rep.witness
    out.write(f"group: {rep.label}\n")
    out.write(f"order: {rep.order}\n")
    out.write(f"subgroup classes: {rep.class_count}\n")
    out.write(f"i(G): {rep.whole_group_index}\n")
    out.write(f"J: {rep.jordan}\n")
    out.write(f"witness: subgroup of order {H.size} with normal abelian "
              f"{format_invariants(abelian_invariants(A))} of order {A.size}\n")
    out.write(f"elapsed: {rep.elapsed:.3f}s\n")
    return EXIT_OK


def _cmd_profile(args, out) -> int:
    G = build(args.expr)
    prof = normal_abelian_profile(G)
    for name, order in zip(prof.render(), prof.orders()):
        out.write(f"{order}\t{name}\n")
    return EXIT_OK


def _cmd_subgroups(args, out) -> int:
    G = build(args.expr)
    inv = subgroup_classes(G)
    out.write(f"group: {G.label}\norder: {G.order}\n")
    out.write(f"classes: {len(inv)}\nsubgroups: {inv.total_subgroups}\n")
    if args.classes:
        out.write("order\tclasses\tsubgroups\n")
        count = Counter()
        total = Counter()
        for c in inv.classes:
            count[c.order] += 1
            total[c.order] += c.class_size
        for order in sorted(count):
            out.write(f"{order}\t{count[order]}\t{total[order]}\n")
    return EXIT_OK


def _cmd_verify(args, out) -> int:
    report = run_verification(args.section, workers=args.workers)
    out.write(FORMATS[args.format](report, timing=not args.no_timing))
    if not report.passed:
        return EXIT_MISMATCH
    return EXIT_OK


def _cmd_export(args, out) -> int:
    G = build(args.expr)
    Path(args.table).write_text(G.to_json(), encoding="utf-8")
    out.write(f"wrote {G.label} (order {G.order}) to {args.table}\n")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jordangroups", description="Jordan constants of finite groups.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="Jordan constant of a group expression")
    c.add_argument("expr")
    c.add_argument("--json", action="store_true", help="print the report as JSON")
    c.set_defaults(func=_cmd_compute)

    c = sub.add_parser("profile", help="isomorphism types of the normal abelian subgroups")
    c.add_argument("expr")
    c.set_defaults(func=_cmd_profile)

    c = sub.add_parser("subgroups", help="subgroup inventory up to conjugacy")
    c.add_argument("expr")
    c.add_argument("--classes", action="store_true", help="break the inventory down by order")
    c.set_defaults(func=_cmd_subgroups)

    c = sub.add_parser("verify-paper", help="check the corpus against its expected values")
    c.add_argument("--section", choices=(*SECTIONS, "all"), default="all")
    c.add_argument("--format", choices=tuple(FORMATS), default="md")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--no-timing", action="store_true", help="zero the timing fields for reproducible output")
    c.set_defaults(func=_cmd_verify)

    c = sub.add_parser("export", help="write the multiplication table as JSON")
    c.add_argument("expr")
    c.add_argument("--table", required=True, metavar="PATH")
    c.set_defaults(func=_cmd_export)
    return p


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = make_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
    except (GroupError, CorpusError, ValueError) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
