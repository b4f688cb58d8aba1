"""Coarse-grained evolutionary partitioning of a replicated (coarsest) graph.

Every PE keeps its own small population.  Offspring come from a multilevel
combine operator: clusters may not contain a cut edge of either parent, so
the better parent can be applied unchanged to the coarsest graph and
non-worsening label propagation refinement carries it back up.  Mutation is
the same operation applied to a single individual with a perturbed cluster
size factor.  From time to time each PE sends its best individual to
``ceil(log2 P)`` random peers.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._seeding import derive_seed, make_rng
from .coarsening import contract, project, restrict_partition
from .config import LATER_CYCLE_FACTOR, Config
from .graph import Graph, edge_cut, lmax_bound, weighted_counts
from .lp import cluster_mode, label_propagation, refine_mode

_EXCHANGE_TAG = 31


@dataclass
class Problem:
    graph: Graph
    k: int
    epsilon: float

    def __post_init__(self):
        self.bound = lmax_bound(self.graph.total_weight, self.k, self.epsilon)

    def individual(self, labels) -> "Individual":
        labels = np.asarray(labels, dtype=np.int64)
        bw = weighted_counts(labels, self.graph.vwgt, self.k)
        overload = max(0, int(bw.max()) - self.bound)
        return Individual(labels, edge_cut(self.graph, labels), overload == 0, overload)


@dataclass
class Individual:
    labels: np.ndarray
    cut: int
    feasible: bool
    overload: int = 0

    def key(self):
        """Sort key: feasible first, then least overload, then smallest cut."""
        return (0 if self.feasible else 1, self.overload, self.cut)

    def same_as(self, other: "Individual") -> bool:
        return self.cut == other.cut and np.array_equal(self.labels, other.labels)


class Population:
    def __init__(self, capacity: int = 8):
        if capacity < 1:
            raise ValueError("population capacity must be positive")
        self.capacity = capacity
        self.individuals: list[Individual] = []

    def __len__(self):
        return len(self.individuals)

    def __iter__(self):
        return iter(self.individuals)

    def best(self) -> Individual:
        return min(self.individuals, key=Individual.key)

    def worst_index(self) -> int:
        return max(range(len(self.individuals)), key=lambda i: self.individuals[i].key())

    def insert(self, ind: Individual) -> bool:
        """Add ``ind`` unless it duplicates a member; when full it replaces
        the worst member, and only if it is at least as good."""
        if any(ind.same_as(o) for o in self.individuals):
            return False
        if len(self.individuals) < self.capacity:
            self.individuals.append(ind)
            return True
        w = self.worst_index()
        if ind.key() <= self.individuals[w].key():
            self.individuals[w] = ind
            return True
        return False


@dataclass
class CombineRecord:
    parent_cuts: tuple
    parents_feasible: bool
    child_cut: int
    child_feasible: bool

    @property
    def violated(self) -> bool:
        return self.parents_feasible and (not self.child_feasible or self.child_cut > min(self.parent_cuts))


@dataclass
class EvoStats:
    combines: list = field(default_factory=list)
    mutations: int = 0
    generations: int = 0
    exchanges: int = 0
    best_history: list = field(default_factory=list)


def create_initial(problem: Problem, rng: np.random.Generator, refine_iters: int = 6) -> Individual:
    """Greedy graph growing followed by label propagation refinement."""
    g, k = problem.graph, problem.k
    if k == 1:
        return problem.individual(np.zeros(g.n, dtype=np.int64))
    target = -(-g.total_weight // k)
    perm = rng.permutation(g.n).astype(np.int64)
    label, bw = _kernels.grow_regions(g.xadj, g.adjncy, g.adjwgt, g.vwgt, k, target, perm)
    label = _kernels.assign_leftovers(g.xadj, g.adjncy, g.vwgt, label, bw, problem.bound)
    if refine_iters:
        mode = refine_mode(g.total_weight, k, problem.epsilon, refine_iters)
        label, _ = label_propagation(g, mode, int(rng.integers(2**63)), labels=label, k=k)
    return problem.individual(label)


def _coarsen_protected(problem: Problem, overlay, carry, f: float, iters: int, threshold: int, seed: int):
    """Restricted cluster coarsening; ``carry`` is projected along."""
    g = problem.graph
    levels = []
    stalls = 0
    lvl = 0
    while g.n > threshold and stalls < 2:
        mode = cluster_mode(g, problem.k, problem.epsilon, f, iters, restriction=overlay,
                            total_weight=problem.graph.total_weight)
        clusters, _ = label_propagation(g, mode, derive_seed(seed, lvl))
        lvl += 1
        coarse, mapping = contract(g, clusters)
        if coarse.n >= g.n:
            stalls += 1
            continue
        stalls = 0
        # raises if a cluster swallowed a protected cut edge
        overlay = restrict_partition(overlay, mapping)
        carry = restrict_partition(carry, mapping)
        levels.append((g, mapping))
        g = coarse
    return levels, g, carry


def combine(p1: Individual, p2: Individual, problem: Problem, config: Config, seed: int,
            f: float | None = None) -> Individual:
    """Multilevel recombination of two k-partitions.

    The offspring is never worse than the better parent when that parent
    is feasible.
    """
    k = problem.k
    g = problem.graph
    better = p1 if p1.key() <= p2.key() else p2
    if k == 1:
        return problem.individual(np.zeros(g.n, dtype=np.int64))
    _, overlay = np.unique(p1.labels * k + p2.labels, return_inverse=True)
    overlay = overlay.astype(np.int64).ravel()
    f = config.first_cycle_factor if f is None else f
    levels, coarsest, labels = _coarsen_protected(
        problem, overlay, better.labels, f, config.lp_iters_coarsen, config.combine_coarsest,
        derive_seed(seed, 0))
    rmode = refine_mode(g.total_weight, k, problem.epsilon, config.lp_iters_refine)
    labels, _ = label_propagation(coarsest, rmode, derive_seed(seed, 1, len(levels)), labels=labels, k=k)
    for depth in range(len(levels) - 1, -1, -1):
        fine, mapping = levels[depth]
        labels = project(labels, mapping)
        labels, _ = label_propagation(fine, rmode, derive_seed(seed, 1, depth), labels=labels, k=k)
    return problem.individual(labels)


def mutate(ind: Individual, problem: Problem, config: Config, rng: np.random.Generator) -> Individual:
    """V-cycle on one individual with a random cluster size factor."""
    f = float(rng.uniform(*LATER_CYCLE_FACTOR))
    return combine(ind, ind, problem, config, int(rng.integers(2**63)), f=f)


def exchange_step(population: Population, problem: Problem, comm, rng: np.random.Generator) -> int:
    """Send the local best to ``ceil(log2 P)`` random peers and absorb what
    arrives.  Returns the number of accepted individuals."""
    P = comm.size
    if P == 1:
        return 0
    others = [r for r in range(P) if r != comm.rank]
    fanout = min(len(others), math.ceil(math.log2(P)))
    targets = set(int(t) for t in rng.choice(others, size=fanout, replace=False))
    best = population.best().labels
    out = [best if r in targets else None for r in range(P)]
    accepted = 0
    for r, labels in enumerate(comm.alltoall(out, _EXCHANGE_TAG)):
        if r != comm.rank and labels is not None:
            accepted += population.insert(problem.individual(labels))
    return accepted


def global_best(ind: Individual, comm) -> Individual:
    """Best individual over all PEs (lowest rank wins ties), on every PE."""
    keys = comm.allgather(ind.key())
    winner = min(range(comm.size), key=lambda r: (keys[r], r))
    labels = comm.bcast(ind.labels if comm.rank == winner else None, root=winner)
    return Individual(np.asarray(labels), *ind_fields(keys[winner]))


def ind_fields(key):
    infeasible, overload, cut = key
    return cut, infeasible == 0, overload


def evolve(graph: Graph, config: Config, comm, seed: int, initial=None,
           generations: int | None = None, seconds: float | None = None,
           stats: EvoStats | None = None) -> Individual:
    """Run the evolutionary algorithm on every PE and return the global best.

    ``initial`` (a k-partition) joins every PE's population.  The budget is
    ``generations`` per PE or ``seconds`` of wall time, checked collectively
    every ``config.exchange_period`` generations; with neither, only the
    initial population is built.
    """
    problem = Problem(graph, config.k, config.epsilon)
    stats = stats if stats is not None else EvoStats()
    rng = make_rng(seed, comm.rank)
    pop = Population(config.population)
    if initial is not None:
        pop.insert(problem.individual(initial))
    for _ in range(config.population - len(pop)):
        pop.insert(create_initial(problem, rng, config.lp_iters_refine))
    stats.best_history.append(pop.best().cut)

    start = time.monotonic()
    period = max(1, config.exchange_period)

    def exhausted() -> bool:
        if generations is not None:
            return stats.generations >= generations
        if seconds is not None:
            return bool(comm.allreduce(int(time.monotonic() - start >= seconds), op="max"))
        return True

    while not exhausted():
        for _ in range(period):
            if generations is not None and stats.generations >= generations:
                break
            _generation(pop, problem, config, rng, stats)
        exchange_step(pop, problem, comm, rng)
        stats.exchanges += 1
        stats.best_history.append(pop.best().cut)
    return global_best(pop.best(), comm)


def _generation(pop: Population, problem: Problem, config: Config, rng, stats: EvoStats):
    members = pop.individuals
    if len(members) >= 2:
        i, j = rng.choice(len(members), size=2, replace=False)
    else:
        i = j = 0
    p1, p2 = members[i], members[j]
    child = combine(p1, p2, problem, config, int(rng.integers(2**63)))
    stats.combines.append(CombineRecord((p1.cut, p2.cut), p1.feasible and p2.feasible,
                                        child.cut, child.feasible))
    pop.insert(child)
    if rng.random() < config.mutation_rate:
        victim = pop.individuals[int(rng.integers(len(pop.individuals)))]
        pop.insert(mutate(victim, problem, config, rng))
        stats.mutations += 1
    stats.generations += 1
