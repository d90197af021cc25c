"""Command-line interface.

Verbs: census (CSV of |B(W)| per type), count (one number), enumerate
(newline-delimited JSON triples), decompose (invert one pair), table1
(the G2 worksheet), verify (invariant suites).  Machine-readable payloads
go to standard output, diagnostics and progress to standard error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import census as census_mod
from . import coideal, rootsys, weylgroup


def _default_threads() -> int | None:
    raw = os.environ.get("WEYLCENSUS_THREADS")
    if not raw:
        return None
    try:
        return max(1, int(raw))
    except ValueError:
        print(f"ignoring malformed WEYLCENSUS_THREADS={raw!r}", file=sys.stderr)
        return None


def _load_cartan(type_arg: str) -> rootsys.CartanMatrix:
    """A type tag like "B3", or a path to a JSON integer matrix."""
    try:
        return rootsys.CartanMatrix.from_label(type_arg)
    except ValueError:
        pass
    path = Path(type_arg)
    if not path.is_file():
        raise ValueError(
            f"{type_arg!r} is neither a known Cartan type label nor a matrix file"
        )
    with open(path) as fh:
        rows = json.load(fh)
    return rootsys.CartanMatrix.from_matrix(rows, label=path.stem)


def _build_table(type_arg: str, order_cap: int | None = None) -> weylgroup.GroupTable:
    rs = rootsys.build_root_system(_load_cartan(type_arg))
    if order_cap is None:
        return weylgroup.enumerate_group(rs)
    return weylgroup.enumerate_group(rs, order_cap=order_cap)


def _format_J(J) -> str:
    if not J:
        return "∅"
    return "{" + ",".join(str(j) for j in sorted(J)) + "}"


def _cmd_census(args) -> int:
    labels = [s for s in (p.strip() for p in args.types.split(",")) if s]
    if not labels:
        print("census: --types is empty", file=sys.stderr)
        return 1
    items = []
    for label in labels:
        try:
            items.append(_load_cartan(label))
        except (ValueError, json.JSONDecodeError):
            items.append(label)  # let census_run report it as a failure
    rows, failures = census_mod.census_run(
        items, threads=args.threads, progress_interval=args.progress
    )
    payload = "\n".join(census_mod.csv_lines(rows)) + "\n"
    sys.stdout.write(payload)
    if args.csv:
        Path(args.csv).write_text(payload)
    for label, message in failures:
        print(f"census: {label} failed: {message}", file=sys.stderr)
    return 1 if failures else 0


def _cmd_count(args) -> int:
    table = _build_table(args.type, args.order_cap)
    print(census_mod.count_BW(table, threads=args.threads))
    return 0


def _cmd_enumerate(args) -> int:
    table = _build_table(args.type, args.order_cap)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for tr in coideal.enumerate_triples(table):
            out.write(coideal.triple_json(table, tr))
            out.write("\n")
    finally:
        if args.out:
            out.close()
    return 0


def _cmd_decompose(args) -> int:
    table = _build_table(args.type, args.order_cap)
    rank = table.rank
    v = table.from_word(weylgroup.parse_word(args.v, rank))
    w = table.from_word(weylgroup.parse_word(args.w, rank))
    tr = coideal.pair_to_triple(table, coideal.Pair(table.element(v), table.element(w)))
    if tr is None:
        print("not in A(W)")
        return 0
    x_word = weylgroup.format_word(tr.x.word, rank)
    u_word = weylgroup.format_word(tr.u.word, rank)
    print(f"x={x_word}, u={u_word}, J={_format_J(tr.J)}")
    return 0


def _cmd_table1(args) -> int:
    table = _build_table("G2")
    d = census_mod.downset_sizes(table)
    widths = np.bitwise_count(weylgroup.pi_cap_xpi_masks(table))
    print("x,downset_size,pi_cap_xpi_size")
    for i in range(table.size):
        word = weylgroup.format_word(table.word_of(i), table.rank)
        print(f"{word},{d[i]},{int(widths[i])}")
    return 0


def _verify_exhaustive(table) -> list[tuple[str, bool, str]]:
    label = table.rs.cartan.label
    results = []

    methods = weylgroup.LEQ_METHODS
    mats = {m: weylgroup.leq_weak_matrix(table, m) for m in methods}
    agree = all(np.array_equal(mats[methods[0]], mats[m]) for m in methods[1:])
    results.append(
        (
            "weak-order-backends",
            agree,
            f"{table.size * table.size} pairs, {len(methods)} methods",
        )
    )

    report = coideal.check_lemma_suite(table)
    for check in report.checks:
        detail = f"{check.checked} cases checked"
        if not check.ok:
            detail += "; " + "; ".join(check.counterexamples[:5])
        results.append((f"lemma-{check.name}", check.ok, detail))

    n_triples = 0
    bad = 0
    for tr in coideal.enumerate_triples(table):
        p = coideal.triple_to_pair(table, tr)
        if coideal.pair_to_triple(table, p) != tr:
            bad += 1
        n_triples += 1
    successes = int(coideal.pair_success_matrix(table).sum())
    formula = census_mod.count_BW(table)
    results.append(
        ("round-trips", bad == 0, f"{n_triples} triples, {bad} failures")
    )
    results.append(
        (
            "census-consistency",
            n_triples == successes == formula,
            f"enumerated={n_triples}, pair successes={successes}, formula={formula}",
        )
    )
    return results


def _verify_sampled(table, samples: int, seed: int) -> list[tuple[str, bool, str]]:
    bad = 0
    for tr in coideal.random_triples(table, samples, seed):
        p = coideal.triple_to_pair(table, tr)
        if coideal.pair_to_triple(table, p) != tr:
            bad += 1
    return [
        (
            "round-trips-sampled",
            bad == 0,
            f"{samples} random triples (seed {seed}), {bad} failures",
        )
    ]


def _cmd_verify(args) -> int:
    table = _build_table(args.type, args.order_cap)
    level = args.level
    if level is None:
        level = "exhaustive" if table.size <= 1200 else "sampled"
    if level == "exhaustive" and table.size > 5000:
        print(
            f"verify: exhaustive level on {table.size} elements is quadratic; "
            "this may take a very long time",
            file=sys.stderr,
        )
    if level == "exhaustive":
        results = _verify_exhaustive(table)
    else:
        results = _verify_sampled(table, args.samples, args.seed)
    label = table.rs.cartan.label
    ok = True
    for name, passed, detail in results:
        ok &= passed
        print(f"{label} {name}: {'PASS' if passed else 'FAIL'} ({detail})")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weylcensus",
        description="Weyl-group census of homogeneous right coideal subalgebras.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_type(p):
        p.add_argument(
            "--type",
            required=True,
            help="Cartan type label (A1..A8, B2..B7, C2..C7, D4..D7, E6..E8, F4, G2) "
            "or path to a JSON Cartan matrix",
        )
        p.add_argument(
            "--order-cap",
            type=int,
            default=None,
            help="abort enumeration past this group order (default 10^7)",
        )

    p = sub.add_parser("census", help="CSV of |B(W)| for a list of types")
    p.add_argument("--types", required=True, help="comma-separated type labels")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--csv", default=None, help="also write the CSV payload here")
    p.add_argument(
        "--progress",
        type=float,
        default=None,
        metavar="SECONDS",
        help="progress reports to stderr at this interval",
    )
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("count", help="print |B(W)| for one type")
    add_type(p)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("enumerate", help="stream all triples as JSON lines")
    add_type(p)
    p.add_argument("--out", default=None, help="write to this file instead of stdout")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("decompose", help="invert the pair map on (v, w)")
    add_type(p)
    p.add_argument("--v", required=True, help='word, e.g. "121" or "e"')
    p.add_argument("--w", required=True, help='word, e.g. "212" or "e"')
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("table1", help="per-element census worksheet for G2")
    p.set_defaults(func=_cmd_table1)

    p = sub.add_parser("verify", help="run the invariant suites for one type")
    add_type(p)
    p.add_argument("--level", choices=("exhaustive", "sampled"), default=None)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except (
        ValueError,
        KeyError,
        OverflowError,
        OSError,
        json.JSONDecodeError,
        rootsys.NotFiniteTypeError,
        weylgroup.GroupTooLargeError,
    ) as exc:
        print(f"weylcensus {args.verb}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
