"""
Partitioning a graph in a few lines
===================================

Build a small graph, split it into two balanced blocks and check the result
with the independent evaluator.
"""

import numpy as np

from lpgp import Graph, evaluate, run_preset

# two triangles joined by a single bridge edge
g = Graph.from_edges(6, [0, 0, 1, 2, 3, 3, 4], [1, 2, 2, 3, 4, 5, 5])
report = run_preset(g, "fast", k=2, seed=0, epsilon=0.0)
print("labels:", report.labels.tolist())
print("cut:", report.cut, "block weights:", report.block_weights.tolist())

# the report is re-checkable: recompute the metrics from the labels alone
m = evaluate(g, report.labels, 2)
assert m.cut == report.cut

# a larger instance: a random geometric graph with 2^12 nodes into 16 blocks.
# The default coarsest size is 10000*k nodes, so a desk-sized graph needs a
# smaller threshold for the multilevel hierarchy to kick in.
from lpgp import gen_rgg

rgg = gen_rgg(12, seed=1)
flat = run_preset(rgg, "fast", k=16, seed=0)
multilevel = run_preset(rgg, "fast", k=16, seed=0, coarsest_threshold=320)
print(f"rgg 2^12, k=16: cut {flat.cut} without coarsening, {multilevel.cut} with it")
print("feasible:", multilevel.feasible, " imbalance: %.3f" % multilevel.imbalance)
print("stage times (s):", {k: round(v, 3) for k, v in multilevel.times.items()})
