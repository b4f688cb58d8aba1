import itertools

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from lpgp.graph import Graph, edge_cut, evaluate, lmax_bound
from lpgp.lp import (CLUSTER, DEGREE, RANDOM, REFINE, RESTRICTED, BlockWeights, LpMode, cluster_bound,
                     label_propagation, lp_round, node_ordering, refine_mode, select_strongest_block)
from lpgp.oracle import brute_force_partition
from support import bridged_triangles, graphs, path, random_graph, star

TRIANGLES = [0, 0, 0, 1, 1, 1]


def canonical(labels):
    """Relabel blocks by first occurrence so clusterings compare by content."""
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.argsort(np.argsort(first))
    return rank[inv.ravel()].tolist()


def run_rounds(graph, labels, mode, seed, order=None, max_rounds=20):
    w = BlockWeights.exact(graph, labels, len(labels) if mode.mode != REFINE else int(labels.max()) + 2)
    for r in range(max_rounds):
        if lp_round(graph, labels, mode, w, seed + r, order).moves == 0:
            return r
    return max_rounds


# ------------------------------------------------------------ clustering

@pytest.mark.parametrize("seed", range(25))
def test_bridged_triangles_cluster_within_three_rounds(seed):
    labels, rounds = label_propagation(bridged_triangles(), LpMode(CLUSTER, 3, iterations=3), seed)
    assert canonical(labels) == TRIANGLES
    assert len(rounds) <= 3


def test_bridged_triangles_fixed_point_unique_over_all_orders():
    g = bridged_triangles()
    mode = LpMode(CLUSTER, 3)
    for order in itertools.permutations(range(6)):
        order = np.asarray(order, dtype=np.int64)
        for seed in (0, 1):
            labels = np.arange(6, dtype=np.int64)
            run_rounds(g, labels, mode, seed, order)
            assert canonical(labels) == TRIANGLES


def test_unit_bound_forbids_every_move():
    g = random_graph(40, 0.2, seed=5)
    labels = np.arange(g.n, dtype=np.int64)
    w = BlockWeights.exact(g, labels, g.n)
    for r in range(3):
        assert lp_round(g, labels, LpMode(CLUSTER, 1), w, r).moves == 0
    assert labels.tolist() == list(range(g.n))


@given(graphs(max_vw=4), st.integers(0, 10), st.integers(0, 2**32))
def test_cluster_weights_never_exceed_bound(g, extra, seed):
    bound = int(g.vwgt.max()) + extra
    labels, _ = label_propagation(g, LpMode(CLUSTER, bound, iterations=5), seed)
    assert np.bincount(labels, weights=g.vwgt).max() <= bound


@given(graphs(), st.integers(1, 4), st.integers(0, 2**32))
def test_restricted_clusters_stay_inside_reference_blocks(g, k, seed):
    ref = np.random.default_rng(seed).integers(0, k, g.n)
    mode = LpMode(RESTRICTED, g.total_weight, iterations=4, restriction=ref)
    labels, _ = label_propagation(g, mode, seed)
    for c in np.unique(labels):
        assert len(np.unique(ref[labels == c])) == 1


def test_cluster_bound_uses_lmax_over_f():
    g = random_graph(100, 0.05, seed=2)
    # Lmax = 1.03 * 50 = 51.5, / 14 = 3.67
    assert cluster_bound(g, 2, 0.03, 14) == 3
    heavy = Graph.from_edges(2, [0], [1], vwgt=[7, 1])
    assert cluster_bound(heavy, 2, 0.0, 14) == 7


# ------------------------------------------------------------ refinement

def test_overloaded_block_forces_tied_node_out():
    g = path(4)
    for order in itertools.permutations(range(4)):
        labels = np.array([0, 0, 0, 1], dtype=np.int64)
        mode = refine_mode(4, 2, 0.0, iterations=1)
        assert mode.bound == 2
        w = BlockWeights.exact(g, labels, 2)
        lp_round(g, labels, mode, w, 0, np.asarray(order, dtype=np.int64))
        assert labels.tolist() == [0, 0, 1, 1]
        assert edge_cut(g, labels) == brute_force_partition(g, 2, 0.0)[0] == 1


def test_select_overloaded_excludes_own_block():
    labels = np.array([0, 0, 0, 1], dtype=np.int64)
    w = BlockWeights.exact(path(4), labels, 2)
    assert select_strongest_block(2, path(4), labels, w, refine_mode(4, 2, 0.0)) == 1


def test_select_skips_ineligible_block():
    # node 0: weight-2 edge into block 1, weight-3 edge into full block 2
    g = Graph.from_edges(3, [0, 0], [1, 2], [2, 3], vwgt=[1, 1, 3])
    labels = np.array([0, 1, 2], dtype=np.int64)
    w = BlockWeights.exact(g, labels, 3)
    assert select_strongest_block(0, g, labels, w, LpMode(CLUSTER, 3)) == 1
    assert select_strongest_block(0, g, labels, w, LpMode(CLUSTER, 4)) == 2


def test_select_isolated_node_has_no_candidate():
    g = Graph.from_edges(3, [0], [1])
    labels = np.arange(3, dtype=np.int64)
    w = BlockWeights.exact(g, labels, 3)
    assert select_strongest_block(2, g, labels, w, LpMode(CLUSTER, 5)) is None


def test_tie_with_own_block_stays():
    labels = np.array([0, 0, 1, 1], dtype=np.int64)
    w = BlockWeights.exact(path(4), labels, 2)
    assert select_strongest_block(1, path(4), labels, w, refine_mode(4, 2, 0.5)) == 0


def test_ties_between_other_blocks_depend_on_seed_only():
    # node 0 connects equally to three singleton clusters
    g = star(3)
    labels = np.arange(4, dtype=np.int64)
    w = BlockWeights.exact(g, labels, 4)
    picks = {select_strongest_block(0, g, labels, w, LpMode(CLUSTER, 4), seed) for seed in range(64)}
    assert picks == {1, 2, 3}
    again = [select_strongest_block(0, g, labels, w, LpMode(CLUSTER, 4), 9) for _ in range(5)]
    assert len(set(again)) == 1


def _feasible_start(g, k, eps, seed):
    labels = np.random.default_rng(seed).integers(0, k, g.n).astype(np.int64)
    return labels, evaluate(g, labels, k).max_block_weight <= lmax_bound(g.total_weight, k, eps)


@given(graphs(min_n=2), st.integers(2, 4), st.integers(0, 2**32))
def test_refine_round_never_increases_cut_when_balanced(g, k, seed):
    eps = 0.5
    labels, ok = _feasible_start(g, k, eps, seed)
    assume(ok)
    mode = refine_mode(g.total_weight, k, eps)
    w = BlockWeights.exact(g, labels, k)
    for r in range(4):
        before = edge_cut(g, labels)
        lp_round(g, labels, mode, w, seed + r)
        assert edge_cut(g, labels) <= before
        assert evaluate(g, labels, k).max_block_weight <= mode.bound


@given(graphs(min_n=2), st.integers(2, 4), st.integers(0, 2**32))
def test_refine_round_never_raises_max_block_weight(g, k, seed):
    labels = np.random.default_rng(seed).integers(0, k, g.n).astype(np.int64)
    mode = refine_mode(g.total_weight, k, 0.0)
    w = BlockWeights.exact(g, labels, k)
    for r in range(4):
        before = evaluate(g, labels, k).max_block_weight
        lp_round(g, labels, mode, w, seed + r)
        after = evaluate(g, labels, k).max_block_weight
        assert after <= max(before, mode.bound)
        assert np.array_equal(w.weights(), evaluate(g, labels, k).block_weights)


@given(graphs(), st.sampled_from([DEGREE, RANDOM]), st.integers(0, 2**32))
def test_zero_move_round_is_a_fixed_point(g, ordering, seed):
    mode = LpMode(CLUSTER, max(2, g.total_weight // 3), ordering=ordering)
    labels = np.arange(g.n, dtype=np.int64)
    w = BlockWeights.exact(g, labels, g.n)
    order = node_ordering(g, ordering, seed)
    for r in range(50):
        if lp_round(g, labels, mode, w, r, order).moves == 0:
            assert lp_round(g, labels, mode, w, r, order).moves == 0
            return


# --------------------------------------------------------------- ordering

def test_degree_ordering_puts_leaves_before_hub():
    assert node_ordering(star(4), DEGREE).tolist() == [1, 2, 3, 4, 0]


def test_degree_ordering_on_regular_graph_is_identity():
    ring = Graph.from_edges(6, np.arange(6), (np.arange(6) + 1) % 6)
    assert node_ordering(ring, DEGREE).tolist() == list(range(6))


def test_random_ordering_is_deterministic_permutation():
    g = path(8)
    a = node_ordering(g, RANDOM, 42)
    assert a.tolist() == node_ordering(g, RANDOM, 42).tolist()
    assert sorted(a.tolist()) == list(range(8))
    assert any(node_ordering(g, RANDOM, s).tolist() != a.tolist() for s in range(5))


# ------------------------------------------------------------ complexity

@pytest.mark.parametrize("n", [200, 2000])
def test_round_work_is_linear(n):
    g = random_graph(n, 8 / n, seed=n)
    labels = np.arange(n, dtype=np.int64)
    st_ = lp_round(g, labels, LpMode(CLUSTER, 10), BlockWeights.exact(g, labels, n), 1)
    # one visit per node, one scan per adjacency entry, at most one inspection per entry
    assert st_.ops <= g.n + 2 * len(g.adjncy)


def test_modes_validate_arguments():
    with pytest.raises(ValueError):
        LpMode("sideways", 3)
    with pytest.raises(ValueError):
        LpMode(RESTRICTED, 3)
    with pytest.raises(ValueError):
        label_propagation(path(3), refine_mode(3, 2, 0.0), 0)
