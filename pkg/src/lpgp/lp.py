"""Sequential size-constrained label propagation.

Three modes share one engine:

``cluster``
    Coarsening.  Every node starts in its own cluster (cluster ID = node ID)
    and may join a neighbouring cluster whose weight stays within ``bound``.
``restricted``
    Like ``cluster`` but a node only considers neighbours that share its
    block in a reference partition, so clusters never straddle a cut edge of
    that partition.
``refine``
    Local search on a k-partition with ``bound = Lmax``.  A node in an
    overloaded block must leave it for the best eligible neighbouring block.

A node whose best target ties with its current block stays put.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from ._seeding import derive_seed, make_rng
from .graph import Graph, compute_lmax, lmax_bound, weighted_counts

CLUSTER = "cluster"
REFINE = "refine"
RESTRICTED = "restricted"
DEGREE = "degree"
RANDOM = "random"


@dataclass
class LpMode:
    mode: str
    bound: int
    iterations: int = 3
    ordering: str | None = None
    restriction: np.ndarray | None = None

    def __post_init__(self):
        if self.mode not in (CLUSTER, REFINE, RESTRICTED):
            raise ValueError(f"unknown label propagation mode {self.mode!r}")
        if self.ordering is None:
            self.ordering = RANDOM if self.mode == REFINE else DEGREE
        if self.ordering not in (DEGREE, RANDOM):
            raise ValueError(f"unknown ordering {self.ordering!r}")
        if self.mode == RESTRICTED:
            if self.restriction is None:
                raise ValueError("restricted mode needs a reference partition")
            self.restriction = np.ascontiguousarray(self.restriction, dtype=np.int64)
        self.bound = int(self.bound)

    @property
    def kernel_mode(self) -> int:
        return _kernels.REFINE if self.mode == REFINE else _kernels.CLUSTER


def size_bound(max_node_weight: int, total_weight: int, k: int, epsilon, f: float) -> int:
    """Integer form of ``U = max(max_v c(v), Lmax / f)``."""
    w = compute_lmax(total_weight, k, epsilon) / Fraction(repr(float(f)))
    return max(int(max_node_weight), int(w))


def cluster_bound(graph: Graph, k: int, epsilon, f: float, total_weight: int | None = None) -> int:
    total = graph.total_weight if total_weight is None else total_weight
    return size_bound(int(graph.vwgt.max()) if graph.n else 1, total, k, epsilon, f)


def cluster_mode(graph, k, epsilon, f, iterations=3, restriction=None, total_weight=None):
    bound = cluster_bound(graph, k, epsilon, f, total_weight)
    if restriction is None:
        return LpMode(CLUSTER, bound, iterations)
    return LpMode(RESTRICTED, bound, iterations, restriction=restriction)


def refine_mode(total_weight, k, epsilon, iterations=6):
    return LpMode(REFINE, lmax_bound(total_weight, k, epsilon), iterations)


class BlockWeights:
    """Block weights seen by label propagation.

    ``weight(b) = base[b] + delta[b]``.  Moves only touch ``delta``.  The
    distributed engine divides a block's remaining capacity among ``share``
    PEs; sequentially ``share`` is 1 and the view is exact.
    """

    def __init__(self, base, share: int = 1):
        self.base = np.ascontiguousarray(base, dtype=np.int64)
        self.delta = np.zeros_like(self.base)
        self.share = int(share)

    @classmethod
    def exact(cls, graph: Graph, labels, size: int) -> "BlockWeights":
        return cls(weighted_counts(labels, graph.vwgt, size))

    def weight(self, b: int) -> int:
        return int(self.base[b] + self.delta[b])

    def weights(self) -> np.ndarray:
        return self.base + self.delta

    def move(self, c: int, src: int, dst: int):
        self.delta[src] -= c
        self.delta[dst] += c


def random_order(n: int, seed: int) -> np.ndarray:
    return make_rng(seed).permutation(n).astype(np.int64)


def node_ordering(graph: Graph, kind: str, seed: int = 0) -> np.ndarray:
    if kind == DEGREE:
        return np.argsort(graph.degrees(), kind="stable").astype(np.int64)
    if kind == RANDOM:
        return random_order(graph.n, seed)
    raise ValueError(f"unknown ordering {kind!r}")


def _scratch(graph: Graph, size: int):
    maxdeg = int(graph.degrees().max()) if graph.n else 0
    return np.zeros(size, dtype=np.int64), np.zeros(maxdeg + 1, dtype=np.int64)


def _ref(graph, mode):
    if mode.mode == RESTRICTED:
        return True, mode.restriction
    return False, np.zeros(1, dtype=np.int64)


def select_strongest_block(v: int, graph: Graph, labels, weights: BlockWeights,
                           mode: LpMode, seed: int = 0):
    """Block ``v`` would move to, its own block if it would stay, or ``None``
    when no neighbouring block (its own included) is eligible."""
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    size = len(weights.base)
    scratch, touched = _scratch(graph, size)
    use_ref, ref = _ref(graph, mode)
    best, _ = _kernels.pick_block(
        v, v, graph.xadj, graph.adjncy, graph.adjwgt, graph.vwgt, labels,
        weights.base, weights.delta, mode.bound, weights.share, mode.kernel_mode,
        use_ref, ref, np.arange(size, dtype=np.int64), np.uint64(seed), scratch, touched)
    return None if best < 0 else int(best)


@dataclass
class RoundStats:
    moves: int
    ops: int


def lp_round(graph: Graph, labels: np.ndarray, mode: LpMode, weights: BlockWeights,
             seed: int, order: np.ndarray | None = None) -> RoundStats:
    """Visit every node once and apply accepted moves to ``labels`` in place.

    ``seed`` drives the tie-breaking hash; it also seeds a random ordering
    when ``order`` is not given.
    """
    if labels.dtype != np.int64 or not labels.flags.c_contiguous:
        raise TypeError("labels must be a contiguous int64 array")
    if order is None:
        order = node_ordering(graph, mode.ordering, seed)
    size = len(weights.base)
    scratch, touched = _scratch(graph, size)
    use_ref, ref = _ref(graph, mode)
    moves, ops = _kernels.lp_sweep(
        order, 0, graph.xadj, graph.adjncy, graph.adjwgt, graph.vwgt, labels,
        weights.base, weights.delta, mode.bound, weights.share, mode.kernel_mode,
        use_ref, ref, np.arange(size, dtype=np.int64), np.uint64(seed), scratch, touched)
    return RoundStats(int(moves), int(ops))


def label_propagation(graph: Graph, mode: LpMode, seed: int, labels=None, k: int | None = None):
    """Run up to ``mode.iterations`` rounds, stopping early at a fixed point.

    Cluster modes start from singletons unless ``labels`` is given.  Refine
    mode needs ``labels`` and ``k``.  Returns ``(labels, rounds)`` where
    ``rounds`` is a list of :class:`RoundStats`.

    Round ``i`` uses tie seed ``derive_seed(seed, i)``; a random ordering is
    drawn from ``derive_seed(seed, i, 0)`` (the trailing 0 is the PE rank,
    which keeps this in lockstep with the distributed engine).
    """
    if mode.mode == REFINE:
        if labels is None or k is None:
            raise ValueError("refine mode needs labels and k")
        size = k
    else:
        size = graph.n
    labels = (np.arange(graph.n, dtype=np.int64) if labels is None
              else np.array(labels, dtype=np.int64))
    weights = BlockWeights.exact(graph, labels, size)
    fixed_order = node_ordering(graph, DEGREE) if mode.ordering == DEGREE else None
    rounds = []
    for i in range(mode.iterations):
        order = fixed_order
        if order is None:
            order = node_ordering(graph, RANDOM, derive_seed(seed, i, 0))
        st = lp_round(graph, labels, mode, weights, derive_seed(seed, i), order)
        rounds.append(st)
        if st.moves == 0:
            break
    return labels, rounds
