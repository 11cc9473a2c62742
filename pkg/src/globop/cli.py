"""Command-line entry point: enumeration, construction, verification."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .collection import Bounds
from .interleave import initial_owc
from .pasting import enumerate_trees, tree_to_json
from .serialize import state_text
from .util import canonical_json
from . import verify


def _bounds_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dim", type=int, default=2, help="maximum dimension")
    parser.add_argument("--max-arity-size", type=int, default=5)
    parser.add_argument("--max-term-size", type=int, default=2)


def cmd_trees(dim: int, max_size: int, out: str | None) -> int:
    trees = enumerate_trees(dim, max_size)
    lines = [canonical_json(tree_to_json(t)) for t in trees]
    if out:
        Path(out).write_text("".join(line + "\n" for line in lines))
    else:
        for line in lines:
            sys.stdout.write(line + "\n")
    print(f"count {len(trees)}", file=sys.stderr)
    return 0


def cmd_build_initial(bounds: Bounds, out: str | None) -> int:
    state = initial_owc(bounds)
    text = state_text(state)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    for k in range(state.collection.max_dim + 1):
        print(f"dim {k}: {len(state.collection.cells_at(k))}")
    return 0


def cmd_verify(suites: list[str], bounds: Bounds, fixture: str | None, out: str | None) -> int:
    if any(s == "all" for s in suites):
        suites = list(verify.SUITE_NAMES)
    reports = []
    failed = False
    for name in suites:
        try:
            rep = verify.run_suite(name, bounds, fixture)
        except KeyError:
            print(f"unknown suite: {name}", file=sys.stderr)
            return 2
        reports.append(rep.to_json())
        failed = failed or not rep.passed
        print(f"{name}: {'pass' if rep.passed else 'FAIL'} ({rep.ms:.0f} ms)")
    if out:
        Path(out).write_text(json.dumps(reports, indent=2, sort_keys=True) + "\n")
    return 1 if failed else 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="globop",
        description="Pasting-diagram enumeration and the interleaved free "
        "operad-with-contraction construction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_trees = sub.add_parser("trees", help="enumerate pasting diagrams as JSON lines")
    p_trees.add_argument("--dim", type=int, required=True)
    p_trees.add_argument("--max-size", type=int, required=True)
    p_trees.add_argument("--out")

    p_build = sub.add_parser("build-initial", help="build the bounded initial structure")
    _bounds_args(p_build)
    p_build.add_argument("--out")

    p_verify = sub.add_parser("verify", help="run verification suites")
    _bounds_args(p_verify)
    p_verify.add_argument(
        "--suite",
        action="append",
        default=[],
        help="suite name, repeatable; 'all' runs every suite",
    )
    p_verify.add_argument("--input", help="fixture file validated instead of fresh builds")
    p_verify.add_argument("--out", help="write reports as a JSON document")

    args = parser.parse_args(argv)
    if args.command == "trees":
        return cmd_trees(args.dim, args.max_size, args.out)
    bounds = Bounds(args.dim, args.max_arity_size, args.max_term_size)
    if args.command == "build-initial":
        if 2 * bounds.max_dim + 1 > bounds.max_arity_size:
            print(
                f"max-arity-size must be at least {2 * bounds.max_dim + 1} "
                f"to fit the unit at dimension {bounds.max_dim}",
                file=sys.stderr,
            )
            return 2
        return cmd_build_initial(bounds, args.out)
    return cmd_verify(args.suite, bounds, args.input, args.out)


if __name__ == "__main__":
    raise SystemExit(main())
