"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 infeasible partition, 3 I/O or
parse error.  ``LPGP_SEED`` sets the default seed.
"""
from __future__ import annotations

import argparse
import configparser
import json
import os
import sys

from .graph import evaluate

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_IO = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _default_seed() -> int:
    raw = os.environ.get("LPGP_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"LPGP_SEED must be an integer, got {raw!r}") from None


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _probability(text):
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError("must lie in [0, 1]")
    return v


def build_parser() -> argparse.ArgumentParser:
    seed = _default_seed()
    p = _Parser(prog="lpgp", description="Multilevel graph partitioning with size-constrained label propagation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("partition", help="partition a METIS graph")
    q.add_argument("graph")
    q.add_argument("--k", type=_positive, required=True)
    q.add_argument("--epsilon", type=float, default=0.03)
    q.add_argument("--preset", choices=("fast", "eco", "minimal"), default="fast")
    q.add_argument("--seed", type=int, default=seed)
    q.add_argument("--procs", type=_positive, default=1)
    q.add_argument("--graph-type", choices=("social", "mesh"), default="social")
    q.add_argument("--threshold", type=_positive, help="coarsest graph size (default 10000*k)")
    q.add_argument("--t1", type=float, default=10.0, help="eco time budget for one PE, seconds")
    q.add_argument("--transport", choices=("inprocess", "multiprocess"), default="inprocess")
    q.add_argument("--out", help="partition file to write")
    q.add_argument("--report", help="JSON run report to write")

    g = sub.add_parser("gen", help="generate a graph")
    gsub = g.add_subparsers(dest="family", required=True, parser_class=_Parser)
    r = gsub.add_parser("rgg", help="random geometric graph with 2^x nodes")
    r.add_argument("--x", type=_positive, required=True)
    r.add_argument("--seed", type=int, default=seed)
    r.add_argument("--out", required=True)
    pl = gsub.add_parser("planted", help="planted partition graph")
    pl.add_argument("--n", type=_positive, required=True)
    pl.add_argument("--blocks", type=_positive, required=True)
    pl.add_argument("--p-in", type=_probability, required=True)
    pl.add_argument("--p-out", type=_probability, required=True)
    pl.add_argument("--seed", type=int, default=seed)
    pl.add_argument("--out", required=True)

    e = sub.add_parser("eval", help="evaluate a partition")
    e.add_argument("graph")
    e.add_argument("partition")
    e.add_argument("--k", type=_positive, required=True)
    e.add_argument("--epsilon", type=float, default=0.03)

    b = sub.add_parser("bench", help="run a benchmark suite (INI file)")
    b.add_argument("suite")
    b.add_argument("--out", help="write the table here as well as to stdout")
    return p


def _transport(kind, procs):
    from .dist.transport import InProcessTransport, MultiprocessTransport
    if procs == 1 and kind == "inprocess":
        return None
    return (MultiprocessTransport if kind == "multiprocess" else InProcessTransport)(procs)


def _cmd_partition(args) -> int:
    from .config import preset_config
    from .io import read_metis, write_partition
    from .pipeline import partition

    graph = read_metis(args.graph)
    if args.procs > graph.n:
        raise _UsageError(f"--procs {args.procs} exceeds the node count {graph.n}")
    if args.epsilon < 0:
        raise _UsageError("--epsilon must be nonnegative")
    overrides = dict(epsilon=args.epsilon, graph_type=args.graph_type)
    if args.threshold:
        overrides["coarsest_threshold"] = args.threshold
    cfg = preset_config(args.preset, args.k, seed=args.seed, P=args.procs, t1=args.t1, **overrides)
    report = partition(graph, cfg, _transport(args.transport, args.procs))
    if args.out:
        write_partition(report.labels, args.out)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report.summary(), fh, indent=2)
            fh.write("\n")
    print(f"cut={report.cut} imbalance={report.imbalance:.6f} "
          f"max_block_weight={int(report.block_weights.max())} feasible={str(report.feasible).lower()}")
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def _cmd_gen(args) -> int:
    from .generators import gen_planted, gen_rgg
    from .io import write_metis

    if args.family == "rgg":
        graph = gen_rgg(args.x, args.seed)
    else:
        if args.blocks > args.n:
            raise _UsageError("--blocks exceeds --n")
        graph = gen_planted(args.n, args.blocks, args.p_in, args.p_out, args.seed)
    write_metis(graph, args.out)
    print(f"n={graph.n} m={graph.m}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    from .io import read_metis, read_partition

    graph = read_metis(args.graph)
    labels = read_partition(args.partition, n=graph.n, k=args.k)
    metrics = evaluate(graph, labels, args.k)
    feasible = metrics.feasible(args.epsilon)
    print(f"cut={metrics.cut} imbalance={metrics.imbalance:.6f} "
          f"max_block_weight={metrics.max_block_weight} feasible={str(feasible).lower()}")
    print("block_weights=" + ",".join(str(int(w)) for w in metrics.block_weights))
    return EXIT_OK


def _cmd_bench(args) -> int:
    from .bench import format_table, run_suite

    table = format_table(run_suite(args.suite))
    sys.stdout.write(table)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(table)
    return EXIT_OK


def main(argv=None) -> int:
    from .io import ParseError

    try:
        args = build_parser().parse_args(argv)
        return {"partition": _cmd_partition, "gen": _cmd_gen, "eval": _cmd_eval,
                "bench": _cmd_bench}[args.command](args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ParseError, configparser.Error) as exc:
        print(f"lpgp: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # bad values that got past argparse, e.g. a malformed bench suite
        print(f"lpgp: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
