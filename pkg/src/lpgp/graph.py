"""Weighted undirected graphs in adjacency-array form and partition metrics.

Node and edge weights are 64-bit integers.  Every feasibility decision goes
through :func:`lmax_bound`, which converts the real-valued bound
``(1 + eps) * ceil(c(V) / k)`` to the largest admissible integer weight using
exact rational arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


def weighted_counts(index, weights, minlength: int = 0) -> np.ndarray:
    """``np.bincount`` with integer weights, summed exactly in int64."""
    index = np.asarray(index, dtype=np.int64).ravel()
    size = max(int(minlength), int(index.max()) + 1 if len(index) else 0)
    out = np.zeros(size, dtype=np.int64)
    np.add.at(out, index, np.asarray(weights, dtype=np.int64).ravel())
    return out


class GraphError(ValueError):
    """Raised when an adjacency structure violates a graph invariant."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable CSR graph.

    ``adjncy[xadj[v]:xadj[v+1]]`` holds the neighbours of ``v`` in ascending
    order and ``adjwgt`` the matching edge weights.  Every undirected edge is
    stored twice.
    """

    xadj: np.ndarray
    adjncy: np.ndarray
    adjwgt: np.ndarray
    vwgt: np.ndarray
    _total: int = field(init=False, repr=False)

    def __post_init__(self):
        for name in ("xadj", "adjncy", "adjwgt", "vwgt"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "_total", int(self.vwgt.sum()))

    @property
    def n(self) -> int:
        return len(self.vwgt)

    @property
    def m(self) -> int:
        return len(self.adjncy) // 2

    @property
    def total_weight(self) -> int:
        return self._total

    @property
    def total_edge_weight(self) -> int:
        return int(self.adjwgt.sum()) // 2

    def degrees(self) -> np.ndarray:
        return np.diff(self.xadj)

    def neighbors(self, v: int) -> np.ndarray:
        return self.adjncy[self.xadj[v]:self.xadj[v + 1]]

    def edge_weights(self, v: int) -> np.ndarray:
        return self.adjwgt[self.xadj[v]:self.xadj[v + 1]]

    def sources(self) -> np.ndarray:
        """Source node of every stored (directed) adjacency entry."""
        return np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())

    def edges(self):
        """Undirected edge list ``(u, v, w)`` with ``u < v`` as three arrays."""
        src = self.sources()
        keep = src < self.adjncy
        return src[keep], self.adjncy[keep], self.adjwgt[keep]

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (np.array_equal(self.xadj, other.xadj)
                and np.array_equal(self.adjncy, other.adjncy)
                and np.array_equal(self.adjwgt, other.adjwgt)
                and np.array_equal(self.vwgt, other.vwgt))

    __hash__ = None

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m}, c(V)={self.total_weight})"

    @classmethod
    def from_edges(cls, n, u, v, w=None, vwgt=None) -> "Graph":
        """Build a graph from undirected edges.

        Each edge may be listed once in either direction (or in both, in
        which case the weights are summed like any other parallel edge).
        Self-loops are rejected.
        """
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        if w is None:
            w = np.ones(len(u), dtype=np.int64)
        w = np.asarray(w, dtype=np.int64).ravel()
        if vwgt is None:
            vwgt = np.ones(n, dtype=np.int64)
        vwgt = np.asarray(vwgt, dtype=np.int64)
        if len(vwgt) != n:
            raise GraphError(f"node weight array has length {len(vwgt)}, expected {n}")
        if np.any(vwgt < 1):
            raise GraphError(f"nonpositive node weight at node {int(np.argmax(vwgt < 1))}")
        if len(u) != len(v) or len(u) != len(w):
            raise GraphError("edge arrays differ in length")
        if len(u):
            if u.min() < 0 or v.min() < 0 or u.max() >= n or v.max() >= n:
                raise GraphError("edge endpoint out of range")
            loops = u == v
            if loops.any():
                i = int(np.argmax(loops))
                raise GraphError(f"self-loop at node {int(u[i])}")
            if np.any(w < 1):
                i = int(np.argmax(w < 1))
                raise GraphError(f"nonpositive edge weight on ({int(u[i])},{int(v[i])})")
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        wt = np.concatenate([w, w])
        return cls._from_directed(n, src, dst, wt, vwgt)

    @classmethod
    def _from_directed(cls, n, src, dst, wt, vwgt) -> "Graph":
        # merges duplicate (src, dst) pairs and sorts adjacency by neighbour
        if len(src):
            key = src * n + dst
            uniq, inv = np.unique(key, return_inverse=True)
            wsum = weighted_counts(inv, wt, len(uniq))
            src = uniq // n
            dst = uniq % n
            wt = wsum
        xadj = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=xadj[1:])
        return cls(xadj, dst, wt, vwgt)


@dataclass
class PartitionMetrics:
    cut: int
    block_weights: np.ndarray
    max_block_weight: int
    imbalance: float
    k: int

    def feasible(self, epsilon: float) -> bool:
        bound = lmax_bound(int(self.block_weights.sum()), self.k, epsilon)
        return self.max_block_weight <= bound


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        # repr gives the shortest decimal that round-trips, i.e. what the user typed
        return Fraction(repr(x))
    return Fraction(x)


def compute_lmax(total_weight: int, k: int, epsilon) -> Fraction:
    """Exact value of ``(1 + epsilon) * ceil(total_weight / k)``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if total_weight < 1:
        raise ValueError("total weight must be positive")
    eps = _as_fraction(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")
    return (1 + eps) * (-(-total_weight // k))


def lmax_bound(total_weight: int, k: int, epsilon) -> int:
    """Largest integer block weight satisfying the balance constraint."""
    return math.floor(compute_lmax(total_weight, k, epsilon))


def check_labels(graph: Graph, labels, k: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (graph.n,):
        raise ValueError(f"labels have shape {labels.shape}, expected ({graph.n},)")
    if graph.n and (labels.min() < 0 or labels.max() >= k):
        bad = int(np.argmax((labels < 0) | (labels >= k)))
        raise ValueError(f"label {int(labels[bad])} of node {bad} outside 0..{k - 1}")
    return labels


def edge_cut(graph: Graph, labels) -> int:
    labels = np.asarray(labels)
    crossing = labels[graph.sources()] != labels[graph.adjncy]
    return int(graph.adjwgt[crossing].sum()) // 2


def evaluate(graph: Graph, labels, k: int) -> PartitionMetrics:
    """Cut and block weights of a k-partition."""
    labels = check_labels(graph, labels, k)
    bw = weighted_counts(labels, graph.vwgt, k)
    ideal = -(-graph.total_weight // k)
    mx = int(bw.max()) if k else 0
    return PartitionMetrics(
        cut=edge_cut(graph, labels),
        block_weights=bw,
        max_block_weight=mx,
        imbalance=mx / ideal - 1.0,
        k=k,
    )


def quotient_graph(graph: Graph, labels) -> Graph:
    """Weighted quotient graph; blocks are renumbered densely in ID order."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (graph.n,):
        raise ValueError("labels must have one entry per node")
    if graph.n and labels.min() < 0:
        raise ValueError("negative label")
    blocks, dense = np.unique(labels, return_inverse=True)
    nq = len(blocks)
    vw = weighted_counts(dense, graph.vwgt, nq)
    src = dense[graph.sources()]
    dst = dense[graph.adjncy]
    keep = src != dst
    return Graph._from_directed(nq, src[keep], dst[keep], graph.adjwgt[keep], vw)


def validate_graph(adjacency, node_weights=None) -> Graph:
    """Check a raw adjacency structure and convert it to a :class:`Graph`.

    ``adjacency[v]`` is a sequence of ``(neighbor, weight)`` pairs (a bare
    neighbour ID means weight 1).  Every edge must appear in both directions
    with equal weight.  Duplicate entries for the same neighbour are merged.
    """
    n = len(adjacency)
    if node_weights is None:
        node_weights = [1] * n
    if len(node_weights) != n:
        raise GraphError(f"node weight list has length {len(node_weights)}, expected {n}")
    for v, c in enumerate(node_weights):
        if c < 1:
            raise GraphError(f"nonpositive node weight {c} at node {v}")
    merged = []
    for v, entries in enumerate(adjacency):
        acc = {}
        for e in entries:
            u, w = (e, 1) if np.isscalar(e) else e
            u, w = int(u), int(w)
            if not 0 <= u < n:
                raise GraphError(f"neighbor {u} of node {v} out of range")
            if u == v:
                raise GraphError(f"self-loop at node {v}")
            if w < 1:
                raise GraphError(f"nonpositive edge weight {w} on ({v},{u})")
            acc[u] = acc.get(u, 0) + w
        merged.append(acc)
    for v, acc in enumerate(merged):
        for u, w in acc.items():
            back = merged[u].get(v)
            if back is None:
                raise GraphError(f"asymmetric adjacency: ({v},{u}) present but ({u},{v}) missing")
            if back != w:
                raise GraphError(f"asymmetric weights on ({v},{u}): {w} vs {back}")
    src, dst, wt = [], [], []
    for v, acc in enumerate(merged):
        for u, w in acc.items():
            src.append(v)
            dst.append(u)
            wt.append(w)
    return Graph._from_directed(
        n,
        np.asarray(src, dtype=np.int64),
        np.asarray(dst, dtype=np.int64),
        np.asarray(wt, dtype=np.int64),
        np.asarray(node_weights, dtype=np.int64),
    )
