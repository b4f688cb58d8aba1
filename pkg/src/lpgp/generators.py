"""Seeded graph generators.

All randomness comes from numpy's Philox4x64 counter-based generator keyed
by the seed, so a seed produces the same graph on every platform.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

from ._seeding import make_rng
from .graph import Graph

_RGG_STREAM = 101
_PLANTED_STREAM = 102


def rgg_radius(n: int) -> float:
    return 0.55 * math.sqrt(math.log(n) / n)


@njit(cache=True)
def _grid_pairs(x, y, r, cells):
    """Point pairs closer than ``r``, found by bucketing into a
    ``cells x cells`` grid whose cell side is at least ``r``."""
    n = len(x)
    cell = np.empty(n, dtype=np.int64)
    for i in range(n):
        cx = min(int(x[i] * cells), cells - 1)
        cy = min(int(y[i] * cells), cells - 1)
        cell[i] = cx * cells + cy
    order = np.argsort(cell, kind="mergesort")
    start = np.zeros(cells * cells + 1, dtype=np.int64)
    for i in range(n):
        start[cell[i] + 1] += 1
    for c in range(cells * cells):
        start[c + 1] += start[c]
    r2 = r * r
    cap = 16 * n + 16
    us = np.empty(cap, dtype=np.int64)
    vs = np.empty(cap, dtype=np.int64)
    cnt = 0
    for i in range(n):
        cx = cell[i] // cells
        cy = cell[i] % cells
        for dx in range(-1, 2):
            for dy in range(-1, 2):
                nx, ny = cx + dx, cy + dy
                if nx < 0 or ny < 0 or nx >= cells or ny >= cells:
                    continue
                c = nx * cells + ny
                for t in range(start[c], start[c + 1]):
                    j = order[t]
                    if j <= i:
                        continue
                    ddx = x[i] - x[j]
                    ddy = y[i] - y[j]
                    if ddx * ddx + ddy * ddy < r2:
                        if cnt == cap:
                            cap *= 2
                            nu = np.empty(cap, dtype=np.int64)
                            nv = np.empty(cap, dtype=np.int64)
                            nu[:cnt] = us[:cnt]
                            nv[:cnt] = vs[:cnt]
                            us, vs = nu, nv
                        us[cnt] = i
                        vs[cnt] = j
                        cnt += 1
    return us[:cnt], vs[:cnt]


def rgg_points(x: int, seed: int) -> np.ndarray:
    n = 1 << x
    return make_rng(seed, _RGG_STREAM, x).random((n, 2))


def geometric_graph(points: np.ndarray, radius: float) -> Graph:
    """Unit-weight graph joining points at Euclidean distance below ``radius``."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    n = len(pts)
    cells = max(1, int(1.0 / radius)) if radius > 0 else 1
    u, v = _grid_pairs(pts[:, 0].copy(), pts[:, 1].copy(), float(radius), cells)
    return Graph.from_edges(n, u, v)


def gen_rgg(x: int, seed: int = 0) -> Graph:
    """Random geometric graph with ``2**x`` nodes in the unit square.

    Nodes are joined when their distance is below
    ``0.55 * sqrt(ln n / n)``.
    """
    if x < 1:
        raise ValueError("x must be at least 1")
    n = 1 << x
    return geometric_graph(rgg_points(x, seed), rgg_radius(n))


def planted_labels(n: int, blocks: int) -> np.ndarray:
    """Contiguous, near-equal planted blocks: node ``v`` is in ``v*blocks//n``."""
    if blocks < 1 or blocks > max(n, 1):
        raise ValueError("need 1 <= blocks <= n")
    return (np.arange(n, dtype=np.int64) * blocks) // n


def _sample_pairs(rng, total: int, p: float) -> np.ndarray:
    if total == 0 or p <= 0:
        return np.zeros(0, dtype=np.int64)
    if p >= 1:
        return np.arange(total, dtype=np.int64)
    count = int(rng.binomial(total, p))
    return np.sort(rng.choice(total, size=count, replace=False)).astype(np.int64)


def _triangle_decode(t: np.ndarray):
    """Index ``t`` of the pair ``(a, b)``, ``a > b``, in row-major lower-triangle order."""
    a = ((1 + np.sqrt(1 + 8 * t.astype(np.float64))) // 2).astype(np.int64)
    # repair floating point rounding
    a[a * (a - 1) // 2 > t] -= 1
    a[(a + 1) * a // 2 <= t] += 1
    return a, t - a * (a - 1) // 2


def gen_planted(n: int, blocks: int, p_in: float, p_out: float, seed: int = 0) -> Graph:
    """Planted partition graph.

    Nodes form ``blocks`` contiguous groups (see :func:`planted_labels`);
    each pair inside a group is joined with probability ``p_in`` and each
    pair across groups with probability ``p_out``, independently.
    """
    for name, p in (("p_in", p_in), ("p_out", p_out)):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1]")
    labels = planted_labels(n, blocks)
    starts = np.searchsorted(labels, np.arange(blocks + 1))
    rng = make_rng(seed, _PLANTED_STREAM)
    us, vs = [], []
    for i in range(blocks):
        a0, a1 = starts[i], starts[i + 1]
        s = a1 - a0
        t = _sample_pairs(rng, s * (s - 1) // 2, p_in)
        a, b = _triangle_decode(t)
        us.append(a0 + a)
        vs.append(a0 + b)
        for j in range(i + 1, blocks):
            b0, b1 = starts[j], starts[j + 1]
            t = _sample_pairs(rng, s * (b1 - b0), p_out)
            us.append(a0 + t // (b1 - b0))
            vs.append(b0 + t % (b1 - b0))
    u = np.concatenate(us) if us else np.zeros(0, np.int64)
    v = np.concatenate(vs) if vs else np.zeros(0, np.int64)
    return Graph.from_edges(n, u, v)


def planted_probabilities(n: int, blocks: int, degree: float, inside: float = 0.875):
    """``(p_in, p_out)`` giving expected average degree ``degree`` with a
    fraction ``inside`` of each node's edges inside its planted block."""
    s = n / blocks
    p_in = inside * degree / max(s - 1, 1)
    p_out = (1 - inside) * degree / max(n - s, 1)
    return min(p_in, 1.0), min(p_out, 1.0)
