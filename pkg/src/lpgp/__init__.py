"""Multilevel graph partitioning with size-constrained label propagation.

Coarsening contracts label propagation clusterings, the coarsest graph is
partitioned by a small evolutionary algorithm, and label propagation refines
the result on the way back up.  Everything also runs on ``P`` simulated
processing elements that exchange messages (:mod:`lpgp.dist`).
"""
from .coarsening import CoarseMapping, contract, project, restrict_partition
from .config import Config, preset_config
from .evo import Individual, Population, combine, create_initial, evolve, exchange_step, mutate
from .generators import gen_planted, gen_rgg, planted_labels, planted_probabilities
from .graph import (Graph, GraphError, PartitionMetrics, compute_lmax, evaluate, lmax_bound,
                    quotient_graph, validate_graph)
from .io import ParseError, read_metis, read_partition, write_metis, write_partition
from .lp import LpMode, label_propagation, lp_round, node_ordering, select_strongest_block
from .oracle import brute_force_partition
from .pipeline import RunReport, partition, partition_sequential, run_preset, vcycle

__version__ = "0.1.0"

__all__ = [
    "CoarseMapping", "Config", "Graph", "GraphError", "Individual", "LpMode", "ParseError",
    "PartitionMetrics", "Population", "RunReport", "brute_force_partition", "combine",
    "compute_lmax", "contract", "create_initial", "evaluate", "evolve", "exchange_step",
    "gen_planted", "gen_rgg", "label_propagation", "lmax_bound", "lp_round", "mutate",
    "node_ordering", "partition", "partition_sequential", "planted_labels", "planted_probabilities", "preset_config",
    "project", "quotient_graph", "read_metis", "read_partition", "restrict_partition",
    "run_preset", "select_strongest_block", "validate_graph", "vcycle", "write_metis",
    "write_partition",
]
