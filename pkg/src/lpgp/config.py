"""Tuning parameters and the fast / eco / minimal presets."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

SOCIAL = "social"
MESH = "mesh"
CLUSTER_FACTOR = {SOCIAL: 14.0, MESH: 20000.0}
LATER_CYCLE_FACTOR = (10.0, 25.0)
PRESETS = ("fast", "eco", "minimal")


@dataclass
class Config:
    k: int
    epsilon: float = 0.03
    P: int = 1
    seed: int = 0
    lp_iters_coarsen: int = 3
    lp_iters_refine: int = 6
    vcycles: int = 2
    graph_type: str = SOCIAL
    cluster_factor: float | None = None
    coarsest_threshold: int | None = None
    evo_generations: int | None = 0
    evo_seconds: float | None = None
    population: int = 8
    mutation_rate: float = 0.1
    exchange_period: int = 2
    combine_threshold: int | None = None
    rescue_rounds: int = 3
    preset: str = "fast"
    trace_phases: bool = False      # keep refinement phase snapshots for auditing

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.lp_iters_coarsen < 1 or self.lp_iters_refine < 0:
            raise ValueError("need at least one coarsening iteration and nonnegative refinement iterations")
        if self.P < 1:
            raise ValueError("P must be at least 1")
        if self.graph_type not in CLUSTER_FACTOR:
            raise ValueError(f"unknown graph type {self.graph_type!r}")
        if self.cluster_factor is not None and self.cluster_factor < 1:
            raise ValueError("cluster factor must be at least 1")
        if self.vcycles < 1:
            raise ValueError("need at least one V-cycle")

    @property
    def first_cycle_factor(self) -> float:
        return self.cluster_factor if self.cluster_factor is not None else CLUSTER_FACTOR[self.graph_type]

    @property
    def threshold(self) -> int:
        return self.coarsest_threshold if self.coarsest_threshold is not None else 10000 * self.k

    @property
    def combine_coarsest(self) -> int:
        return self.combine_threshold if self.combine_threshold is not None else max(16, 2 * self.k)

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)


def preset_config(name: str, k: int, seed: int = 0, P: int = 1, t1: float = 10.0, **overrides) -> Config:
    """Configuration for a named preset.

    ``eco`` gives the evolutionary algorithm ``t1 / P`` seconds per run,
    split evenly across its V-cycles.
    """
    if name == "fast":
        base = dict(vcycles=2, evo_generations=0, evo_seconds=None)
    elif name == "minimal":
        base = dict(vcycles=1, evo_generations=0, evo_seconds=None)
    elif name == "eco":
        vc = overrides.get("vcycles", 5)
        base = dict(vcycles=vc, evo_generations=None, evo_seconds=t1 / P / vc)
    else:
        raise ValueError(f"unknown preset {name!r}; choose one of {', '.join(PRESETS)}")
    base.update(overrides)
    return Config(k=k, seed=seed, P=P, preset=name, **base)
