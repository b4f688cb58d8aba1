"""
Combining two partitions
========================

The combine operator never contracts an edge that either parent cuts, so the
better parent survives to the coarsest level unchanged and refinement can
only improve it.
"""

import numpy as np

from lpgp import Config, gen_rgg
from lpgp.evo import Problem, combine, create_initial

g = gen_rgg(10, seed=3)
problem = Problem(g, k=4, epsilon=0.03)
config = Config(k=4)
rng = np.random.default_rng(0)

p1 = create_initial(problem, rng)
p2 = create_initial(problem, rng)
print(f"parents: cut {p1.cut} and {p2.cut}")

children = []
for seed in range(5):
    child = combine(p1, p2, problem, config, seed)
    print(f"child {seed}: cut {child.cut}, feasible {child.feasible}")
    assert child.cut <= min(p1.cut, p2.cut)
    children.append(child)

# combining the best child with itself is a V-cycle with a fresh seed
best = min(children, key=lambda ind: ind.key())
for seed in range(5, 10):
    best = min(best, combine(best, best, problem, config, seed), key=lambda ind: ind.key())
print("after a few self-combines:", best.cut)
