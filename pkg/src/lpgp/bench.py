"""Benchmark harness.

A suite is an INI file.  The ``[suite]`` section sets defaults; every other
section is one instance, either generated or read from disk::

    [suite]
    k = 16
    epsilon = 0.03
    preset = fast
    repetitions = 10
    procs = 1
    seed = 0

    [rgg12]
    generator = rgg
    x = 12

    [planted]
    generator = planted
    n = 4096
    blocks = 64
    p_in = 0.05
    p_out = 0.0003

    [mesh]
    path = del12.graph
    graph_type = mesh

Instance sections may override any ``[suite]`` key.  Each instance is run
``repetitions`` times with seeds ``seed, seed+1, ...``; the report gives the
arithmetic mean and the best cut per instance and geometric means across
instances.
"""
from __future__ import annotations

import configparser
import math
import time
from dataclasses import dataclass
from pathlib import Path

from .config import preset_config
from .generators import gen_planted, gen_rgg
from .io import read_metis
from .pipeline import partition

_DEFAULTS = dict(k="2", epsilon="0.03", preset="fast", repetitions="10", procs="1", seed="0",
                 graph_type="social", t1="10.0")


@dataclass
class InstanceResult:
    name: str
    n: int
    m: int
    cuts: list
    times: list
    feasible: int

    @property
    def avg_cut(self) -> float:
        return sum(self.cuts) / len(self.cuts)

    @property
    def best_cut(self) -> int:
        return min(self.cuts)

    @property
    def avg_time(self) -> float:
        return sum(self.times) / len(self.times)


def geometric_mean(values) -> float:
    values = list(values)
    if not values:
        return float("nan")
    if any(v <= 0 for v in values):
        # a zero cut would swamp the mean; shift like the usual benchmark practice
        return math.exp(sum(math.log(v + 1) for v in values) / len(values)) - 1
    return math.exp(sum(math.log(v) for v in values) / len(values))


def load_suite(path) -> list[tuple[str, dict]]:
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    base = dict(_DEFAULTS)
    if parser.has_section("suite"):
        base.update(parser["suite"])
    instances = []
    for name in parser.sections():
        if name == "suite":
            continue
        opts = dict(base)
        opts.update(parser[name])
        if "path" in opts:
            p = Path(opts["path"])
            opts["path"] = str(p if p.is_absolute() else Path(path).parent / p)
        elif opts.get("generator") not in ("rgg", "planted"):
            raise ValueError(f"instance [{name}] needs 'path' or generator = rgg|planted")
        instances.append((name, opts))
    if not instances:
        raise ValueError("suite defines no instances")
    return instances


def build_graph(opts: dict):
    if "path" in opts:
        return read_metis(opts["path"])
    gseed = int(opts.get("graph_seed", 0))
    if opts["generator"] == "rgg":
        return gen_rgg(int(opts["x"]), gseed)
    return gen_planted(int(opts["n"]), int(opts["blocks"]), float(opts["p_in"]), float(opts["p_out"]), gseed)


def run_instance(name: str, opts: dict, transport_factory=None) -> InstanceResult:
    graph = build_graph(opts)
    k, procs = int(opts["k"]), int(opts["procs"])
    overrides = dict(epsilon=float(opts["epsilon"]), graph_type=opts["graph_type"])
    if "threshold" in opts:
        overrides["coarsest_threshold"] = int(opts["threshold"])
    cuts, times, feasible = [], [], 0
    for rep in range(int(opts["repetitions"])):
        cfg = preset_config(opts["preset"], k, seed=int(opts["seed"]) + rep, P=procs,
                            t1=float(opts["t1"]), **overrides)
        t = time.perf_counter()
        report = partition(graph, cfg, transport_factory(procs) if transport_factory else None)
        times.append(time.perf_counter() - t)
        cuts.append(report.cut)
        feasible += report.feasible
    return InstanceResult(name, graph.n, graph.m, cuts, times, feasible)


def run_suite(path, transport_factory=None) -> list[InstanceResult]:
    return [run_instance(name, opts, transport_factory) for name, opts in load_suite(path)]


def format_table(results: list[InstanceResult]) -> str:
    """Tab-separated table with a header row and a final geometric-mean row."""
    rows = ["instance\tn\tm\truns\tfeasible\tavg_cut\tbest_cut\tavg_time_s"]
    for r in results:
        rows.append(f"{r.name}\t{r.n}\t{r.m}\t{len(r.cuts)}\t{r.feasible}\t"
                    f"{r.avg_cut:.2f}\t{r.best_cut}\t{r.avg_time:.4f}")
    rows.append("geomean\t-\t-\t-\t-\t"
                f"{geometric_mean(r.avg_cut for r in results):.2f}\t"
                f"{geometric_mean(r.best_cut for r in results):.2f}\t"
                f"{geometric_mean(r.avg_time for r in results):.4f}")
    return "\n".join(rows) + "\n"
