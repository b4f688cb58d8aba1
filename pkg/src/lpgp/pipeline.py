"""The complete partitioner: iterated multilevel V-cycles.

One V-cycle coarsens with size-constrained label propagation clusterings
until the graph has at most ``config.threshold`` nodes, partitions the
coarsest graph with the evolutionary algorithm, and projects the result back
up, running label propagation refinement on every level.  Later V-cycles
restrict clusters to blocks of the current partition, which is also seeded
into the evolutionary population, so a cycle cannot lose quality unless the
distributed refinement races.  A cycle whose result is worse than its input
is discarded.

:func:`partition` runs on ``config.P`` PEs through a transport;
:func:`partition_sequential` is the single-process reference built only from
the sequential modules.  With ``P == 1`` both produce identical labels.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np

from ._seeding import derive_seed, make_rng
from .coarsening import contract, project, restrict_partition
from .config import LATER_CYCLE_FACTOR, Config, preset_config
from .dist.distgraph import DistGraph
from .dist.pcontract import gather_coarsest, gather_labels, parallel_contract, parallel_project, push_to_coarse
from .dist.plp import parallel_lp, records_bytes
from .dist.transport import SerialComm, run_spmd
from .evo import EvoStats, Problem, evolve
from .graph import Graph, check_labels, evaluate
from .lp import CLUSTER, RESTRICTED, LpMode, label_propagation, refine_mode, size_bound

# seed stream identifiers
_COARSEN, _EVO, _REFINE, _RESCUE, _FACTOR = 1, 2, 3, 4, 5
_STALL_RATIO = 0.95


@dataclass
class LevelStats:
    n: int
    m: int
    rounds: int
    moves: int
    records: int = 0    # label update bytes sent by all PEs
    n_coarse: int = 0   # size of the contracted graph


@dataclass
class RefineAudit:
    """Phase snapshots of one distributed refinement call, per PE in rank
    order: owned node weights and the :class:`~lpgp.dist.plp.PhaseTrace`
    list."""

    cycle: int
    depth: int          # hierarchy level; -1 for the rescue rounds
    owned_weights: list
    traces: list


@dataclass
class RunReport:
    labels: np.ndarray
    cut: int
    block_weights: np.ndarray
    imbalance: float
    feasible: bool
    k: int
    epsilon: float
    P: int
    levels: list = field(default_factory=list)          # per cycle, list of LevelStats
    vcycle_cuts: list = field(default_factory=list)     # cut kept after each cycle
    cycle_keys: list = field(default_factory=list)      # (input key, raw output key) per cycle
    fallbacks: int = 0
    combines: list = field(default_factory=list)
    times: dict = field(default_factory=dict)
    audits: list = field(default_factory=list)          # RefineAudit, when config.trace_phases

    @property
    def vcycles(self) -> int:
        return len(self.vcycle_cuts)

    def summary(self) -> dict:
        """JSON-friendly view without the label array."""
        return {
            "cut": int(self.cut),
            "block_weights": [int(w) for w in self.block_weights],
            "imbalance": float(self.imbalance),
            "feasible": bool(self.feasible),
            "k": self.k,
            "epsilon": self.epsilon,
            "P": self.P,
            "levels": [[asdict(s) for s in cyc] for cyc in self.levels],
            "vcycle_cuts": [int(c) for c in self.vcycle_cuts],
            "fallbacks": self.fallbacks,
            "times": {k: round(v, 6) for k, v in self.times.items()},
        }


def cycle_factor(config: Config, cycle: int) -> float:
    if cycle == 0:
        return config.first_cycle_factor
    return float(make_rng(config.seed, _FACTOR, cycle).uniform(*LATER_CYCLE_FACTOR))


class _Clock:
    def __init__(self):
        self.times = {}

    def add(self, name, since):
        now = time.perf_counter()
        self.times[name] = self.times.get(name, 0.0) + now - since
        return now


def _evo_budget(config: Config):
    return dict(generations=config.evo_generations, seconds=config.evo_seconds)


def _stalled(n_fine, n_coarse, slow):
    slow = slow + 1 if n_coarse > _STALL_RATIO * n_fine else 0
    return slow


# ----------------------------------------------------------------- sequential

def _sequential_cycle(graph: Graph, config: Config, cycle: int, labels_in, clock: _Clock,
                      stats: EvoStats):
    k, eps, seed = config.k, config.epsilon, config.seed
    total = graph.total_weight
    f = cycle_factor(config, cycle)
    t = time.perf_counter()
    g, ref = graph, labels_in
    levels, level_stats, slow = [], [], 0
    while g.n > config.threshold and slow < 2:
        mode = LpMode(CLUSTER if ref is None else RESTRICTED,
                      size_bound(int(g.vwgt.max()), total, k, eps, f),
                      config.lp_iters_coarsen, restriction=ref)
        clusters, rounds = label_propagation(g, mode, derive_seed(seed, _COARSEN, cycle, len(levels)))
        coarse, mapping = contract(g, clusters)
        if coarse.n == g.n:
            break
        level_stats.append(LevelStats(g.n, g.m, len(rounds), sum(r.moves for r in rounds), 0, coarse.n))
        slow = _stalled(g.n, coarse.n, slow)
        if ref is not None:
            ref = restrict_partition(ref, mapping)
        levels.append((g, mapping))
        g = coarse
    t = clock.add("coarsen", t)

    best = evolve(g, config, SerialComm(), derive_seed(seed, _EVO, cycle), initial=ref,
                  stats=stats, **_evo_budget(config))
    t = clock.add("evolve", t)

    labels = best.labels
    rmode = refine_mode(total, k, eps, config.lp_iters_refine)
    for depth in range(len(levels) - 1, -1, -1):
        fine, mapping = levels[depth]
        labels = project(labels, mapping)
        labels, _ = label_propagation(fine, rmode, derive_seed(seed, _REFINE, cycle, depth), labels=labels, k=k)
    problem = Problem(graph, k, eps)
    out = problem.individual(labels)
    if not out.feasible and config.rescue_rounds > 0:
        mode = refine_mode(total, k, eps, config.rescue_rounds)
        labels, _ = label_propagation(graph, mode, derive_seed(seed, _RESCUE, cycle), labels=labels, k=k)
        out = problem.individual(labels)
    clock.add("refine", t)
    return out, level_stats


def partition_sequential(graph: Graph, config: Config, initial=None) -> RunReport:
    """Single-process reference implementation of :func:`partition`."""
    start = time.perf_counter()
    clock = _Clock()
    problem = Problem(graph, config.k, config.epsilon)
    current = None if initial is None else problem.individual(check_labels(graph, initial, config.k))
    first = 0 if initial is None else 1
    report_levels, cuts, keys, combines = [], [], [], []
    fallbacks = 0
    for cycle in range(first, first + config.vcycles):
        stats = EvoStats()
        out, lv = _sequential_cycle(graph, config, cycle, None if current is None else current.labels,
                                    clock, stats)
        report_levels.append(lv)
        combines.extend(stats.combines)
        keys.append((None if current is None else current.key(), out.key()))
        if current is None or out.key() <= current.key():
            current = out
        else:
            fallbacks += 1
        cuts.append(current.cut)
    clock.times["total"] = time.perf_counter() - start
    return _report(graph, config, current.labels, report_levels, cuts, keys, fallbacks, combines, clock.times)


# ---------------------------------------------------------------- distributed

def _owned_and_ghosts(dg: DistGraph, full):
    return np.asarray(full, dtype=np.int64)[dg.local_gids()]


def _refine(comm, dg: DistGraph, labels, mode: LpMode, seed: int, k: int, audits, cycle: int, depth: int):
    res = parallel_lp(dg, comm, labels, mode, seed, k=k, trace=audits is not None)
    if audits is not None:
        audits.append(RefineAudit(cycle, depth, [dg.vwgt[:dg.n_owned].copy()], [res.trace]))
    return res.labels


def _dist_cycle(comm, dg0: DistGraph, graph: Graph, config: Config, cycle: int, labels_in,
                clock: _Clock, stats: EvoStats, audits):
    k, eps, seed = config.k, config.epsilon, config.seed
    total = graph.total_weight
    f = cycle_factor(config, cycle)
    t = time.perf_counter()
    dg = dg0
    ref = None if labels_in is None else _owned_and_ghosts(dg0, labels_in)
    levels, level_stats, slow = [], [], 0
    while dg.n_global > config.threshold and slow < 2:
        heaviest = int(dg.vwgt[:dg.n_owned].max()) if dg.n_owned else 0
        heaviest = int(comm.allreduce(heaviest, op="max"))
        mode = LpMode(CLUSTER if ref is None else RESTRICTED,
                      size_bound(heaviest, total, k, eps, f),
                      config.lp_iters_coarsen, restriction=ref)
        res = parallel_lp(dg, comm, dg.local_gids(), mode, derive_seed(seed, _COARSEN, cycle, len(levels)))
        coarse, mapping = parallel_contract(dg, comm, res.labels)
        if mapping.n_coarse == dg.n_global:
            break
        m = int(comm.allreduce(len(dg.adjncy))) // 2
        volume = int(comm.allreduce(records_bytes(res.phases)))
        level_stats.append(LevelStats(dg.n_global, m, len(res.phases), res.moves, volume, mapping.n_coarse))
        slow = _stalled(dg.n_global, mapping.n_coarse, slow)
        if ref is not None:
            ref = push_to_coarse(dg, comm, mapping, coarse, ref)
        levels.append((dg, mapping))
        dg = coarse
    t = clock.add("coarsen", t)

    coarsest = gather_coarsest(dg, comm)
    init = None if ref is None else gather_labels(dg, comm, ref)
    best = evolve(coarsest, config, comm, derive_seed(seed, _EVO, cycle), initial=init,
                  stats=stats, **_evo_budget(config))
    t = clock.add("evolve", t)

    labels = _owned_and_ghosts(dg, best.labels)
    rmode = refine_mode(total, k, eps, config.lp_iters_refine)
    for depth in range(len(levels) - 1, -1, -1):
        fine, mapping = levels[depth]
        labels = parallel_project(fine, comm, mapping, dg, labels)
        labels = _refine(comm, fine, labels, rmode, derive_seed(seed, _REFINE, cycle, depth), k, audits, cycle, depth)
        dg = fine
    problem = Problem(graph, k, eps)
    out = problem.individual(gather_labels(dg0, comm, labels))
    if not out.feasible and config.rescue_rounds > 0:
        mode = refine_mode(total, k, eps, config.rescue_rounds)
        labels = _refine(comm, dg0, labels, mode, derive_seed(seed, _RESCUE, cycle), k, audits, cycle, -1)
        out = problem.individual(gather_labels(dg0, comm, labels))
    clock.add("refine", t)
    return out, level_stats


def _spmd_partition(comm, graph: Graph, config: Config, initial):
    start = time.perf_counter()
    clock = _Clock()
    dg0 = DistGraph.from_graph(graph, comm.rank, comm.size)
    problem = Problem(graph, config.k, config.epsilon)
    current = None if initial is None else problem.individual(initial)
    first = 0 if initial is None else 1
    report_levels, cuts, keys, combines = [], [], [], []
    audits = [] if config.trace_phases else None
    fallbacks = 0
    for cycle in range(first, first + config.vcycles):
        stats = EvoStats()
        out, lv = _dist_cycle(comm, dg0, graph, config, cycle,
                              None if current is None else current.labels, clock, stats, audits)
        report_levels.append(lv)
        combines.extend(stats.combines)
        keys.append((None if current is None else current.key(), out.key()))
        if current is None or out.key() <= current.key():
            current = out
        else:
            fallbacks += 1
        cuts.append(current.cut)
    combines = [c for part in comm.allgather(combines) for c in part]
    if audits is not None:
        per_pe = comm.allgather(audits)
        for i, a in enumerate(audits):
            a.owned_weights = [pe[i].owned_weights[0] for pe in per_pe]
            a.traces = [pe[i].traces[0] for pe in per_pe]
    clock.times["total"] = time.perf_counter() - start
    if comm.rank != 0:
        return None
    report = _report(graph, config, current.labels, report_levels, cuts, keys, fallbacks, combines, clock.times)
    report.audits = audits or []
    return report


def partition(graph: Graph, config: Config, transport=None, initial=None) -> RunReport:
    """Partition ``graph`` into ``config.k`` blocks on ``config.P`` PEs.

    ``transport`` defaults to the deterministic in-process transport (or a
    direct call when ``P == 1``).  ``initial`` is an optional k-partition to
    improve; it makes every cycle a restricted V-cycle.
    """
    if config.P > graph.n:
        raise ValueError(f"cannot distribute {graph.n} nodes over {config.P} PEs")
    if transport is not None and transport.size != config.P:
        raise ValueError("transport size does not match config.P")
    if initial is not None:
        initial = check_labels(graph, initial, config.k)
    return run_spmd(_spmd_partition, config.P, transport, graph, config, initial)[0]


def vcycle(graph: Graph, labels_in, config: Config, transport=None) -> np.ndarray:
    """One V-cycle that improves ``labels_in``; never returns a worse partition."""
    return partition(graph, config.replace(vcycles=1), transport, initial=labels_in).labels


def run_preset(graph: Graph, preset: str, k: int, seed: int = 0, P: int = 1, transport=None,
               **overrides) -> RunReport:
    return partition(graph, preset_config(preset, k, seed=seed, P=P, **overrides), transport)


def _report(graph, config, labels, levels, cuts, keys, fallbacks, combines, times) -> RunReport:
    metrics = evaluate(graph, labels, config.k)
    return RunReport(
        labels=np.asarray(labels, dtype=np.int64), cut=metrics.cut, block_weights=metrics.block_weights,
        imbalance=metrics.imbalance, feasible=metrics.feasible(config.epsilon), k=config.k,
        epsilon=config.epsilon, P=config.P, levels=levels, vcycle_cuts=cuts, cycle_keys=keys,
        fallbacks=fallbacks, combines=combines, times=times)
