"""Cluster contraction and projection of partitions back to finer levels."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, weighted_counts


@dataclass
class CoarseMapping:
    """``cluster_ids[i]`` is the cluster that became coarse node ``i``
    (this is q inverted); ``fine_to_coarse[v]`` is C(v)."""

    cluster_ids: np.ndarray
    fine_to_coarse: np.ndarray

    @property
    def n_coarse(self) -> int:
        return len(self.cluster_ids)

    def q(self, cluster_id: int) -> int:
        i = int(np.searchsorted(self.cluster_ids, cluster_id))
        if i == len(self.cluster_ids) or self.cluster_ids[i] != cluster_id:
            raise KeyError(cluster_id)
        return i


@dataclass
class Level:
    graph: Graph
    mapping: CoarseMapping | None = None


def contract(graph: Graph, clustering) -> tuple[Graph, CoarseMapping]:
    """Replace every cluster by one node.

    Coarse IDs follow ascending cluster ID.  Node weights and inter-cluster
    edge weights are summed; intra-cluster edges disappear.
    """
    clustering = np.asarray(clustering, dtype=np.int64)
    if clustering.shape != (graph.n,):
        raise ValueError("clustering must have one entry per node")
    ids, C = np.unique(clustering, return_inverse=True)
    C = C.astype(np.int64).ravel()
    nc = len(ids)
    vw = weighted_counts(C, graph.vwgt, nc)
    src = C[graph.sources()]
    dst = C[graph.adjncy]
    keep = src != dst
    coarse = Graph._from_directed(nc, src[keep], dst[keep], graph.adjwgt[keep], vw)
    return coarse, CoarseMapping(ids, C)


def project(coarse_labels, mapping: CoarseMapping) -> np.ndarray:
    coarse_labels = np.asarray(coarse_labels, dtype=np.int64)
    if len(coarse_labels) != mapping.n_coarse:
        raise ValueError(f"expected {mapping.n_coarse} coarse labels, got {len(coarse_labels)}")
    return coarse_labels[mapping.fine_to_coarse]


def restrict_partition(fine_labels, mapping: CoarseMapping) -> np.ndarray:
    """Coarse partition induced by a fine one whose blocks contain whole clusters."""
    fine_labels = np.asarray(fine_labels, dtype=np.int64)
    out = np.empty(mapping.n_coarse, dtype=np.int64)
    out[mapping.fine_to_coarse] = fine_labels
    if not np.array_equal(out[mapping.fine_to_coarse], fine_labels):
        raise ValueError("a cluster spans several blocks of the partition")
    return out
