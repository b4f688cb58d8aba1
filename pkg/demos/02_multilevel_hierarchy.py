"""
Watching the hierarchy shrink
=============================

Size-constrained label propagation finds dense clusters; contracting them
gives the next level.  On a graph with planted communities one contraction
step already removes most nodes.
"""

import numpy as np

from lpgp import Config, gen_planted, partition, planted_probabilities
from lpgp.coarsening import contract
from lpgp.lp import cluster_mode, label_propagation

n, blocks = 1 << 13, 32
g = gen_planted(n, blocks, *planted_probabilities(n, blocks, 16), seed=0)
print(f"input: n={g.n} m={g.m} average degree {2 * g.m / g.n:.1f}")

# one level by hand: cluster with U = max(max c(v), Lmax/f), then contract
mode = cluster_mode(g, k=16, epsilon=0.03, f=14, iterations=3)
clusters, rounds = label_propagation(g, mode, seed=0)
coarse, mapping = contract(g, clusters)
print(f"cluster bound U={mode.bound}; moves per round {[r.moves for r in rounds]}")
print(f"level 1: n={coarse.n} (shrink {g.n / coarse.n:.1f}x), heaviest node {coarse.vwgt.max()}")

# the whole pipeline on four PEs reports the same kind of statistics per level
report = partition(g, Config(k=16, P=4, seed=0, coarsest_threshold=300))
for cycle, levels in enumerate(report.levels):
    sizes = " -> ".join([str(lv.n) for lv in levels] + [str(levels[-1].n_coarse)])
    volume = sum(lv.records for lv in levels)
    print(f"V-cycle {cycle}: {sizes}; {volume} bytes of label updates; cut after cycle {report.vcycle_cuts[cycle]}")
