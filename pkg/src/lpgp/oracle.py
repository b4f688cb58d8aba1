"""Exhaustive reference partitioner for tiny graphs."""
from __future__ import annotations

import numpy as np

from .graph import Graph, lmax_bound

MAX_NODES = 12
_CHUNK = 1 << 16


def _assignments(n: int, k: int, lo: int, hi: int) -> np.ndarray:
    """Rows ``lo..hi-1`` of the lexicographic enumeration of ``{0..k-1}^n``
    (node 0 is the most significant digit)."""
    idx = np.arange(lo, hi, dtype=np.int64)
    out = np.empty((hi - lo, n), dtype=np.int64)
    for v in range(n - 1, -1, -1):
        out[:, v] = idx % k
        idx //= k
    return out


def brute_force_partition(graph: Graph, k: int, epsilon: float) -> tuple[int, np.ndarray] | tuple[None, None]:
    """Minimum cut over all balanced k-labelings.

    Ties go to the lexicographically smallest label vector.  Returns
    ``(None, None)`` when no labeling satisfies the balance constraint.
    """
    n = graph.n
    if n > MAX_NODES:
        raise ValueError(f"brute force is limited to {MAX_NODES} nodes, got {n}")
    if k < 1:
        raise ValueError("k must be at least 1")
    bound = lmax_bound(graph.total_weight, k, epsilon) if n else 0
    src, dst, w = graph.edges()
    best_cut, best = None, None
    total = k ** n
    for lo in range(0, total, _CHUNK):
        A = _assignments(n, k, lo, min(total, lo + _CHUNK))
        bw = np.zeros((len(A), k), dtype=np.int64)
        for b in range(k):
            bw[:, b] = (A == b) @ graph.vwgt
        ok = (bw <= bound).all(axis=1)
        if not ok.any():
            continue
        cuts = (A[:, src] != A[:, dst]) @ w if len(w) else np.zeros(len(A), np.int64)
        cuts = np.where(ok, cuts, np.iinfo(np.int64).max)
        i = int(np.argmin(cuts))          # first minimum = lexicographically smallest
        if best_cut is None or cuts[i] < best_cut:
            best_cut, best = int(cuts[i]), A[i].copy()
    return best_cut, best
