"""Batch command-line front end.

Subcommands: ``reduce`` (write reduced trees plus a report), ``stats``
(report only), ``verify`` (check oracle properties on small trees), and
``bench`` (scaling ladder).  Thread count defaults to the MULTRED_THREADS
environment variable; results are ordered by input position regardless of
thread count, and a fixed seed makes reduce/stats reports byte-identical.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from random import Random

from . import bench as bench_mod
from . import oracle
from .generate import random_mul_tree
from .newick import NewickSyntaxError, parse_collection, write_newick
from .pipeline import run_pipeline
from .reduce import compare_adjacent, reduce_to_mrf
from .report import build_row, format_summary, summarize, write_csv_report, write_json_report
from .tree import MulTree, distinct_label_counts, is_isomorphic

HARD_ORACLE_CAP = 16


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    output: str | None = None
    report_path: str | None = None
    report_format: str = "csv"
    strict: bool = False
    singly: bool = False
    oracle_max_leaves: int = 12
    seed: int = 42
    threads: int = 1
    generate: int | None = None
    force: bool = False
    sizes: list[int] = field(default_factory=list)
    multiplicity: int | None = None
    repeats: int = 3


def _default_threads() -> int:
    env = os.environ.get("MULTRED_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multred",
        description="Reduce multi-labeled trees to their maximally reduced form.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--in", dest="input", required=True, help="input Newick collection")
        p.add_argument("--report", dest="report_path", help="write per-tree report here")
        p.add_argument("--format", dest="report_format", choices=("csv", "json"), default="csv")
        p.add_argument("--strict", action="store_true", help="abort on the first parse error")
        p.add_argument("--threads", type=int, default=_default_threads())

    p_reduce = sub.add_parser("reduce", help="reduce a collection and write the results")
    add_common(p_reduce)
    p_reduce.add_argument("--out", dest="output", required=True, help="output Newick file")
    p_reduce.add_argument("--singly", action="store_true",
                          help="also write singly-labeled trees next to --out")

    p_stats = sub.add_parser("stats", help="report only, no tree output")
    add_common(p_stats)

    p_verify = sub.add_parser("verify", help="check reduction properties against the oracle")
    group = p_verify.add_mutually_exclusive_group(required=True)
    group.add_argument("--in", dest="input", help="input Newick collection")
    group.add_argument("--generate", type=int, metavar="N", help="verify N random trees")
    p_verify.add_argument("--seed", type=int, default=42)
    p_verify.add_argument("--max-leaves", dest="max_leaves", type=int, default=12)
    p_verify.add_argument("--force", action="store_true",
                          help="allow more than 16 leaves (slow)")
    p_verify.add_argument("--strict", action="store_true",
                          help="oversized input trees are an error instead of a skip")

    p_bench = sub.add_parser("bench", help="time the reduction across a size ladder")
    p_bench.add_argument("--sizes", default="100,300,1000,3000,10000",
                         help="comma-separated leaf counts")
    p_bench.add_argument("--seed", type=int, default=42)
    p_bench.add_argument("--multiplicity", type=int, default=None,
                         help="fix every label's copy number")
    p_bench.add_argument("--repeats", type=int, default=3)
    p_bench.add_argument("--out", dest="output", help="CSV destination (default stdout)")
    return parser


def _read_collection(path: str, strict: bool):
    with open(path, encoding="utf-8") as fh:
        return parse_collection(fh, strict=strict)


def _write_report(rows: list[dict], config: RunConfig) -> None:
    summary = summarize(rows)
    if config.report_path:
        with open(config.report_path, "w", encoding="utf-8") as fh:
            if config.report_format == "json":
                write_json_report(rows, summary, fh)
            else:
                write_csv_report(rows, summary, fh)
    print(format_summary(summary))


def _run_trees(doc, config: RunConfig):
    def work(tree: MulTree):
        return run_pipeline(tree)

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(work, doc.trees))
    else:
        results = [work(t) for t in doc.trees]
    return results


def cmd_reduce(config: RunConfig) -> int:
    try:
        doc = _read_collection(config.inputs[0], config.strict)
    except (OSError, NewickSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for issue in doc.errors:
        print(f"warning: line {issue.line}, column {issue.column}: {issue.message}",
              file=sys.stderr)
    results = _run_trees(doc, config)

    if config.command == "reduce":
        out_path = Path(config.output)
        with open(out_path, "w", encoding="utf-8") as fh:
            for mrf, _, _ in results:
                fh.write(write_newick(mrf) + "\n")
        if config.singly:
            singly_path = out_path.with_name(out_path.stem + ".singly" + out_path.suffix)
            with open(singly_path, "w", encoding="utf-8") as fh:
                for _, _, outcome in results:
                    fh.write(write_newick(outcome.singly) if outcome.singly is not None else ";")
                    fh.write("\n")

    rows = [
        build_row(i + 1, doc.line_numbers[i], report, outcome)
        for i, (_, report, outcome) in enumerate(results)
    ]
    _write_report(rows, config)
    return 0


_VERIFY_PROPERTIES = (
    "information_preserved",
    "maximally_reduced",
    "unique_edge_quartets",
    "idempotent",
    "conflict_free",
    "dominance_agreement",
    "relabeling_superset",
)


def _verify_tree(tree: MulTree, force: bool) -> list[str]:
    """Names of the properties that fail on `tree`."""
    failures = []
    base = oracle.information_content(tree, force=force)
    mrf, _ = reduce_to_mrf(tree)

    if oracle.information_content(mrf, force=force) != base:
        failures.append("information_preserved")
    if not oracle.is_maximally_reduced_oracle(mrf, force=force):
        failures.append("maximally_reduced")
    if any(not oracle.resolves_unique_quartet(mrf, e, force=force)
           for e in mrf.internal_edges()):
        failures.append("unique_edge_quartets")
    mrf2, _ = reduce_to_mrf(mrf)
    if not is_isomorphic(mrf, mrf2):
        failures.append("idempotent")
    if oracle.conflicting_topologies(base):
        failures.append("conflict_free")

    counts = distinct_label_counts(tree)
    deltas = {e: oracle.edge_quartets(tree, e, force=force) for e in tree.internal_edges()}
    informative = [e for e, d in deltas.items() if d]
    for i, e1 in enumerate(informative):
        for e2 in informative[i + 1:]:
            if not (set(e1) & set(e2)):
                continue
            verdict = compare_adjacent(counts, e1, e2)
            fwd, bwd = deltas[e1] <= deltas[e2], deltas[e2] <= deltas[e1]
            expected = {
                (True, True): "equal",
                (True, False): "left_subsumed",
                (False, True): "right_subsumed",
                (False, False): "incomparable",
            }[(fwd, bwd)]
            if verdict.value != expected:
                failures.append("dominance_agreement")
                break
        else:
            continue
        break

    relabeled = oracle.relabeled_single_tree(tree)
    widened = oracle.information_content(relabeled, force=force)
    if not base <= oracle.restrict_to_labels(widened, tree.labels()):
        failures.append("relabeling_superset")
    return failures


def cmd_verify(config: RunConfig) -> int:
    cap = HARD_ORACLE_CAP if not config.force else 10**9
    if config.oracle_max_leaves > cap:
        print(f"error: --max-leaves above {HARD_ORACLE_CAP} requires --force", file=sys.stderr)
        return 1
    if config.generate is not None:
        rng = Random(config.seed)
        trees = [random_mul_tree(rng, rng.randint(4, config.oracle_max_leaves))
                 for _ in range(config.generate)]
    else:
        try:
            doc = _read_collection(config.inputs[0], strict=True)
        except (OSError, NewickSyntaxError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        trees = []
        for tree in doc.trees:
            if tree.n_leaves > config.oracle_max_leaves:
                message = f"tree with {tree.n_leaves} leaves exceeds --max-leaves"
                if config.strict:
                    print(f"error: {message}", file=sys.stderr)
                    return 1
                print(f"warning: {message}; skipped", file=sys.stderr)
                continue
            trees.append(tree)

    passes = {name: 0 for name in _VERIFY_PROPERTIES}
    bad = 0
    for tree in trees:
        failures = _verify_tree(tree, config.force)
        for name in _VERIFY_PROPERTIES:
            if name not in failures:
                passes[name] += 1
        if failures:
            bad += 1
            print(f"FAIL {','.join(failures)}: {write_newick(tree)}", file=sys.stderr)
    for name in _VERIFY_PROPERTIES:
        print(f"{name}: {passes[name]}/{len(trees)}")
    return 1 if bad else 0


def cmd_bench(config: RunConfig) -> int:
    points = bench_mod.run_ladder(config.sizes, config.seed,
                                  multiplicity=config.multiplicity,
                                  repeats=config.repeats)
    lines = ["n_leaves,n_nodes,seconds"]
    lines += [f"{p.n_leaves},{p.n_nodes},{p.seconds:.6f}" for p in points]
    if len(points) >= 2:
        lines.append(f"# loglog_slope={bench_mod.loglog_slope(points):.3f}")
    text = "\n".join(lines) + "\n"
    if config.output:
        with open(config.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    config = RunConfig(command=args.command)
    if args.command in ("reduce", "stats"):
        config.inputs = [args.input]
        config.report_path = args.report_path
        config.report_format = args.report_format
        config.strict = args.strict
        config.threads = max(1, args.threads)
        if args.command == "reduce":
            config.output = args.output
            config.singly = args.singly
        return cmd_reduce(config)
    if args.command == "verify":
        config.inputs = [args.input] if args.input else []
        config.generate = args.generate
        config.seed = args.seed
        config.oracle_max_leaves = args.max_leaves
        config.force = args.force
        config.strict = args.strict
        return cmd_verify(config)
    config.sizes = [int(s) for s in str(args.sizes).split(",") if s.strip()]
    config.seed = args.seed
    config.multiplicity = args.multiplicity
    config.repeats = args.repeats
    config.output = args.output
    return cmd_bench(config)


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
