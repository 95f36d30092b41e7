"""Command-line interface: gen / trace / analyze / validate / compare.

Exit codes: 0 success, 1 validation failure, 2 bad arguments.  The master
seed defaults to the PRAMTRAJ_SEED environment variable.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .algorithms import ALGORITHMS, PAIRS, run
from .algorithms.search import SearchInstance
from .algorithms.sorting import SortInstance
from .efficiency import (
    pair_metrics,
    render_pair_table,
    render_table,
    report_ndjson,
    scaling_report,
)
from .graphs import Digraph
from .harness import GenConfig, build_samples, schema_path_for, write_dataset
from .machine import UNDEF, Trace
from .trajectory import (
    DatasetFormatError,
    parse_ndjson,
    parse_schema,
    validate_sample,
)


class BadInput(Exception):
    """User-facing argument problem; maps to exit code 2."""


def _default_seed() -> int:
    return int(os.environ.get("PRAMTRAJ_SEED", "0"))


def _parse_n_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise BadInput(f"bad --n-list {text!r}: expected comma-separated integers")
    if not values or any(v < 1 for v in values):
        raise BadInput(f"bad --n-list {text!r}: sizes must be positive")
    return values


def _parse_inline(algo: str, text: str):
    try:
        if algo in ("parallel_search", "binary_search"):
            items_part, _, x_part = text.partition(";")
            if not x_part:
                raise ValueError("expected 'items;x'")
            items = tuple(float(p) for p in items_part.split(","))
            return SearchInstance(items=items, x=float(x_part))
        if algo in ("oets", "bubble_sort"):
            return SortInstance(items=tuple(float(p) for p in text.split(",")))
        head, _, edge_part = text.partition(":")
        n = int(head)
        edges = set()
        if edge_part:
            for piece in edge_part.split(","):
                u_part, _, v_part = piece.partition("->")
                if not v_part:
                    raise ValueError(f"bad edge {piece!r}")
                edges.add((int(u_part), int(v_part)))
        return Digraph(n, frozenset(edges))
    except (ValueError, TypeError) as err:
        raise BadInput(f"bad --input for {algo}: {err}") from None


def _state_note(algo: str, inst, trace: Trace, t: int) -> str:
    state = trace.states[t]
    if algo in ("oets", "bubble_sort"):
        n = inst.n
        table = state.shared[:n]
        order = [f"{inst.items[node]:g}" for node in table]
        prev = trace.states[t - 1].shared[:n]
        swaps = []
        for k in range(n - 1):
            if prev[k] != table[k] and prev[k] == table[k + 1]:
                swaps.append((prev[k], prev[k + 1]))
        return f"order=[{', '.join(order)}] swaps={swaps}"
    if algo == "binary_search":
        lo, hi, mid = state.shared[0], state.shared[1], state.shared[2]
        return f"lo={lo} hi={hi} mid={mid}"
    if algo == "parallel_search":
        rank = state.shared[0]
        return f"rank={'?' if rank is UNDEF else rank}"
    if algo == "dcsc":
        pivot = state.shared[0]
        assigned = sum(1 for row in state.local if row[3] is True)
        return f"pivot={'?' if pivot is UNDEF else pivot} assigned={assigned}"
    done = sum(1 for u in range(inst.n) if state.shared[3 * inst.n + u] is not UNDEF)
    return f"assigned={done}"


def cmd_gen(args) -> int:
    n_list = (args.n,) if args.n is not None else _parse_n_list(args.n_list)
    cfg = GenConfig(
        algo_id=args.algo,
        n_list=n_list,
        samples_per_n=args.samples,
        seed=args.seed if args.seed is not None else _default_seed(),
        max_degree=args.max_degree,
    )
    samples = build_samples(cfg)
    out = Path(args.out)
    try:
        write_dataset(out, samples, args.algo)
    except OSError as err:
        raise BadInput(f"cannot write {out}: {err}") from None
    print(f"wrote {len(samples)} samples to {out} (schema: {schema_path_for(out)})")
    return 0


def cmd_trace(args) -> int:
    inst = _parse_inline(args.algo, args.input)
    output, trace = run(args.algo, inst)
    print(f"algo: {args.algo}")
    print(f"input: {args.input}")
    print(f"width={trace.width} depth={trace.depth}")
    for rec in trace.activity:
        nodes = sorted(rec.active_nodes)
        edges = sorted(rec.active_edges)
        note = _state_note(args.algo, inst, trace, rec.step)
        print(
            f"step {rec.step}: active={nodes} edges={edges} ops={rec.op_count}"
            f" graph_op={rec.graph_op} | {note}"
        )
    print(f"output: {output}")
    return 0


def cmd_analyze(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        report = scaling_report(
            args.algo,
            list(_parse_n_list(args.n_list)),
            args.samples,
            seed,
            max_degree=args.max_degree,
            exhaustive=args.exhaustive,
        )
    except ValueError as err:
        raise BadInput(str(err)) from None
    sys.stdout.write(report_ndjson(report).decode("utf-8"))
    print(render_table(report))
    return 0


def cmd_validate(args) -> int:
    path = Path(args.in_path)
    schema_path = schema_path_for(path)
    try:
        data = path.read_bytes()
        schema_data = schema_path.read_bytes()
    except OSError as err:
        raise BadInput(f"cannot read {err.filename}: {err.strerror}") from None
    try:
        algo, probes = parse_schema(schema_data)
        samples = parse_ndjson(data)
    except DatasetFormatError as err:
        print(f"{path}: {err}")
        return 1
    failures = 0
    for lineno, sample in enumerate(samples, start=1):
        if sample.algo != algo:
            print(f"line {lineno}: algorithm {sample.algo!r} does not match schema {algo!r}")
            failures += 1
            continue
        for violation in validate_sample(sample, probes):
            print(f"line {lineno}: {violation}")
            failures += 1
    if failures:
        print(f"{failures} violations in {len(samples)} samples")
        return 1
    print(f"ok: {len(samples)} samples, zero violations")
    return 0


def cmd_compare(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    seq_algo, par_algo = PAIRS[args.pair]
    seq = pair_metrics(seq_algo, args.n, args.samples, seed, args.max_degree)
    par = pair_metrics(par_algo, args.n, args.samples, seed, args.max_degree)
    print(render_pair_table(seq, par))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pramtraj",
        description="Simulate parallel/sequential algorithm pairs, emit hint-trajectory "
        "datasets, and measure capacity and efficiency.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a dataset + schema sidecar")
    gen.add_argument("--algo", required=True, choices=ALGORITHMS)
    size = gen.add_mutually_exclusive_group(required=True)
    size.add_argument("--n", type=int)
    size.add_argument("--n-list")
    gen.add_argument("--samples", type=int, required=True)
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--max-degree", type=int, default=3)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_gen)

    trace = sub.add_parser("trace", help="print a step-by-step trace")
    trace.add_argument("--algo", required=True, choices=ALGORITHMS)
    trace.add_argument("--input", required=True)
    trace.set_defaults(func=cmd_trace)

    analyze = sub.add_parser("analyze", help="emit an efficiency report")
    analyze.add_argument("--algo", required=True, choices=ALGORITHMS)
    analyze.add_argument("--n-list", required=True)
    analyze.add_argument("--samples", type=int, required=True)
    analyze.add_argument("--seed", type=int, default=None)
    analyze.add_argument("--max-degree", type=int, default=3)
    analyze.add_argument("--exhaustive", action="store_true")
    analyze.set_defaults(func=cmd_analyze)

    validate = sub.add_parser("validate", help="validate a dataset file")
    validate.add_argument("--in", dest="in_path", required=True)
    validate.set_defaults(func=cmd_validate)

    compare = sub.add_parser("compare", help="sequential vs parallel metrics")
    compare.add_argument("--pair", required=True, choices=sorted(PAIRS))
    compare.add_argument("--n", type=int, required=True)
    compare.add_argument("--samples", type=int, required=True)
    compare.add_argument("--seed", type=int, default=None)
    compare.add_argument("--max-degree", type=int, default=3)
    compare.set_defaults(func=cmd_compare)
    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except BadInput as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
