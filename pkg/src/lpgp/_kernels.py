"""Compiled inner loops of size-constrained label propagation.

Labels are *slots*: dense indices into the block-weight arrays.  The
sequential engine uses block IDs as slots directly; the distributed engine
maps the global cluster IDs it has seen to slots.  ``slot_gid`` translates a
slot back to the global block ID, which together with the global node ID
feeds the tie-breaking hash, so decisions never depend on slot layout or on
how many PEs share the graph.

Block weight of slot ``b`` as seen by the caller is ``base[b] + delta[b]``.
Moving ``v`` into ``b`` is allowed iff ``share * (delta[b] + c(v)) <=
bound - base[b]``; with ``share == 1`` this is the plain size constraint.
"""
import heapq

import numpy as np
from numba import njit

_M1 = np.uint64(0x9E3779B97F4A7C15)
_M2 = np.uint64(0xBF58476D1CE4E5B9)
_M3 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)

CLUSTER = 0
REFINE = 1


@njit(cache=True, inline="always")
def _mix(x):
    z = x + _M1
    z = (z ^ (z >> _S30)) * _M2
    z = (z ^ (z >> _S27)) * _M3
    return z ^ (z >> _S31)


@njit(cache=True, inline="always")
def tie_key(seed, node_gid, block_gid):
    return _mix(seed ^ _mix(np.uint64(node_gid) ^ _mix(np.uint64(block_gid))))


@njit(cache=True)
def pick_block(v, node_gid, xadj, adjncy, adjwgt, vwgt, label, base, delta,
               bound, share, mode, use_ref, ref, slot_gid, seed, scratch, touched):
    """Best target slot for ``v`` or -1 when it has no candidate.

    Returns ``(slot, ops)``.  ``scratch`` must be all-zero on entry and is
    restored before returning.
    """
    own = label[v]
    cv = vwgt[v]
    nt = 0
    ops = 1
    for e in range(xadj[v], xadj[v + 1]):
        u = adjncy[e]
        ops += 1
        if use_ref and ref[u] != ref[v]:
            continue
        b = label[u]
        if scratch[b] == 0:
            touched[nt] = b
            nt += 1
        scratch[b] += adjwgt[e]

    own_conn = scratch[own]
    overloaded = mode == REFINE and base[own] + delta[own] > bound
    best = -1
    best_conn = 0
    best_key = np.uint64(0)
    if own_conn > 0 and not overloaded:
        best = own
        best_conn = own_conn
    for i in range(nt):
        b = touched[i]
        ops += 1
        if b == own:
            continue
        c = scratch[b]
        if share * (delta[b] + cv) > bound - base[b]:
            continue
        if c > best_conn:
            best = b
            best_conn = c
            best_key = tie_key(seed, node_gid, slot_gid[b])
        elif c == best_conn and best != own:
            key = tie_key(seed, node_gid, slot_gid[b])
            if key < best_key:
                best = b
                best_key = key
    for i in range(nt):
        scratch[touched[i]] = 0
    return best, ops


@njit(cache=True)
def lp_sweep(order, gid_offset, xadj, adjncy, adjwgt, vwgt, label, base, delta,
             bound, share, mode, use_ref, ref, slot_gid, seed, scratch, touched):
    """One label propagation round over ``order``.

    Returns ``(moves, ops)`` where ``ops`` counts node visits, adjacency
    scans and candidate inspections.
    """
    moves = 0
    ops = 0
    for i in range(len(order)):
        v = order[i]
        best, o = pick_block(v, gid_offset + v, xadj, adjncy, adjwgt, vwgt, label,
                             base, delta, bound, share, mode, use_ref, ref, slot_gid,
                             seed, scratch, touched)
        ops += o
        own = label[v]
        if best >= 0 and best != own:
            cv = vwgt[v]
            delta[own] -= cv
            delta[best] += cv
            label[v] = best
            moves += 1
    return moves, ops


@njit(cache=True)
def grow_regions(xadj, adjncy, adjwgt, vwgt, k, target, perm):
    """Greedy graph growing.

    Blocks ``0..k-1`` are grown one after another from seeds taken in
    ``perm`` order; the frontier node with the largest gain (edge weight
    into the block minus edge weight to unassigned nodes) is added while the
    block stays within ``target``.  When a block's frontier runs dry it
    restarts from the next unassigned seed.  Nodes that fit nowhere keep
    label -1.
    """
    n = len(vwgt)
    label = np.full(n, -1, dtype=np.int64)
    wdeg = np.zeros(n, dtype=np.int64)
    for v in range(n):
        for e in range(xadj[v], xadj[v + 1]):
            wdeg[v] += adjwgt[e]
    conn = np.zeros(n, dtype=np.int64)
    stamp = np.full(n, -1, dtype=np.int64)
    rejected = np.full(n, -1, dtype=np.int64)
    bw = np.zeros(k, dtype=np.int64)
    ptr = 0
    for b in range(k):
        heap = [(np.int64(0), np.int64(0))]
        heap.pop()
        while bw[b] < target:
            if len(heap) == 0:
                while ptr < n and (label[perm[ptr]] >= 0 or rejected[perm[ptr]] == b):
                    ptr += 1
                if ptr >= n:
                    break
                s = perm[ptr]
                stamp[s] = b
                conn[s] = 0
                heapq.heappush(heap, (np.int64(wdeg[s]), s))
            negg, u = heapq.heappop(heap)
            if label[u] >= 0 or rejected[u] == b:
                continue
            if negg != wdeg[u] - 2 * conn[u]:
                continue  # superseded by a later push
            if bw[b] + vwgt[u] > target:
                rejected[u] = b
                continue
            label[u] = b
            bw[b] += vwgt[u]
            for e in range(xadj[u], xadj[u + 1]):
                w = adjncy[e]
                if label[w] >= 0 or rejected[w] == b:
                    continue
                if stamp[w] != b:
                    stamp[w] = b
                    conn[w] = 0
                conn[w] += adjwgt[e]
                heapq.heappush(heap, (np.int64(wdeg[w] - 2 * conn[w]), w))
        # seeds rejected for this block may still fit later blocks
        ptr = 0
    return label, bw


@njit(cache=True)
def assign_leftovers(xadj, adjncy, vwgt, label, bw, bound):
    """Give every unassigned node the lightest block among its neighbours
    (or the lightest block overall when that would exceed ``bound`` or it
    has no assigned neighbour).  Processes nodes in waves outward from the
    assigned region."""
    n = len(label)
    k = len(bw)
    queue = np.empty(n, dtype=np.int64)
    inq = np.zeros(n, dtype=np.bool_)
    head = 0
    tail = 0
    for v in range(n):
        if label[v] < 0:
            for e in range(xadj[v], xadj[v + 1]):
                if label[adjncy[e]] >= 0:
                    queue[tail] = v
                    tail += 1
                    inq[v] = True
                    break
    remaining = 0
    for v in range(n):
        if label[v] < 0:
            remaining += 1
    while remaining > 0:
        if head == tail:
            # isolated component: seed with any unassigned node
            for v in range(n):
                if label[v] < 0 and not inq[v]:
                    queue[tail] = v
                    tail += 1
                    inq[v] = True
                    break
        v = queue[head]
        head += 1
        best = -1
        for e in range(xadj[v], xadj[v + 1]):
            b = label[adjncy[e]]
            if b >= 0 and bw[b] + vwgt[v] <= bound and (best < 0 or bw[b] < bw[best]):
                best = b
        if best < 0:
            best = 0
            for b in range(1, k):
                if bw[b] < bw[best]:
                    best = b
        label[v] = best
        bw[best] += vwgt[v]
        remaining -= 1
        for e in range(xadj[v], xadj[v + 1]):
            w = adjncy[e]
            if label[w] < 0 and not inq[w]:
                queue[tail] = w
                tail += 1
                inq[w] = True
    return label
