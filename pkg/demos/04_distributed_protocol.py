"""
The message-passing runtime up close
====================================

Each PE owns an interval of nodes plus read-only ghost copies of their
neighbours.  Label changes of interface nodes travel one phase later; during
refinement an allreduce at every phase boundary restores exact block weights.
"""

import numpy as np

from lpgp import gen_rgg
from lpgp.dist import DistGraph, InProcessTransport, parallel_lp
from lpgp.lp import cluster_mode, refine_mode

g = gen_rgg(11, seed=2)
P, k = 4, 8
# node IDs of a random geometric graph carry no locality, so intervals have many ghosts
for dg in (DistGraph.from_graph(g, p, P) for p in range(P)):
    print(f"PE {dg.rank}: owns {dg.first}..{dg.last - 1}, {dg.n_ghost} ghosts, talks to PEs {dg.adjacent_pes}")


def coarsen(comm):
    dg = DistGraph.from_graph(g, comm.rank, comm.size)
    res = parallel_lp(dg, comm, dg.local_gids(), cluster_mode(g, k, 0.03, 14, 12), seed=1,
                      stop_on_converge=False)
    return [(p.moves, p.records_sent) for p in res.phases]


phases = InProcessTransport(P).run(coarsen)
print("\nclustering phase: global moves, update records sent by all PEs")
for i in range(len(phases[0])):
    print(f"  {i:2d}: {phases[0][i][0]:5d} {sum(pe[i][1] for pe in phases):5d}")

start = np.random.default_rng(0).integers(0, k, g.n)


def refine(comm):
    dg = DistGraph.from_graph(g, comm.rank, comm.size)
    res = parallel_lp(dg, comm, start[dg.local_gids()], refine_mode(g.total_weight, k, 0.03, 4), seed=1,
                      k=k, trace=True)
    return res.trace


traces = InProcessTransport(P).run(refine)
print("\nrefinement: block weights every PE sees at each phase boundary")
for i, t in enumerate(traces[0]):
    labels = np.concatenate([tr[i].owned_labels for tr in traces])
    exact = np.bincount(labels, minlength=k)
    same = all(np.array_equal(tr[i].block_weights, exact) for tr in traces)
    print(f"  phase {i}: {t.block_weights.tolist()}  exact on every PE: {same}")
