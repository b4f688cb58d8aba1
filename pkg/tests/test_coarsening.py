import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lpgp.coarsening import contract, project, restrict_partition
from lpgp.graph import evaluate
from lpgp.lp import LpMode, CLUSTER, label_propagation
from support import bridged_triangles, edge_dict, graphs, naive_quotient, random_graph


def test_contract_bridged_triangles():
    coarse, mp = contract(bridged_triangles(), [0, 0, 0, 3, 3, 3])
    assert coarse.vwgt.tolist() == [3, 3]
    assert edge_dict(coarse) == {(0, 1): 1}
    assert mp.fine_to_coarse.tolist() == [0, 0, 0, 1, 1, 1]
    assert mp.q(3) == 1 and mp.n_coarse == 2


def test_contract_singletons_is_identity():
    g = random_graph(20, 0.3, seed=4, max_w=3, max_vw=2)
    coarse, mp = contract(g, np.arange(g.n))
    assert coarse == g
    assert mp.fine_to_coarse.tolist() == list(range(g.n))


def test_q_orders_coarse_ids_by_cluster_id():
    _, mp = contract(bridged_triangles(), [5, 5, 1, 4, 4, 1])
    assert mp.cluster_ids.tolist() == [1, 4, 5]
    assert mp.fine_to_coarse.tolist() == [2, 2, 0, 1, 1, 0]
    with pytest.raises(KeyError):
        mp.q(2)


def test_contract_matches_brute_force_and_preserves_cuts():
    g = random_graph(50, 0.12, seed=7, max_w=4, max_vw=3)
    clusters = np.random.default_rng(7).integers(0, 7, g.n)
    clusters[:7] = np.arange(7)
    coarse, mp = contract(g, clusters)
    nodes, edges = naive_quotient(g, clusters)
    assert coarse.vwgt.tolist() == [nodes[c] for c in range(7)]
    assert edge_dict(coarse) == edges
    rng = np.random.default_rng(1)
    for _ in range(50):
        x = rng.integers(0, 3, coarse.n)
        a, b = evaluate(coarse, x, 3), evaluate(g, project(x, mp), 3)
        assert a.cut == b.cut
        assert a.block_weights.tolist() == b.block_weights.tolist()


def test_project_bridged_triangles():
    _, mp = contract(bridged_triangles(), [0, 0, 0, 1, 1, 1])
    assert project([0, 1], mp).tolist() == [0, 0, 0, 1, 1, 1]


def test_project_identity_mapping():
    g = random_graph(9, 0.4, seed=0)
    _, mp = contract(g, np.arange(g.n))
    x = np.random.default_rng(0).integers(0, 4, g.n)
    assert project(x, mp).tolist() == x.tolist()


def test_project_checks_length():
    _, mp = contract(bridged_triangles(), [0, 0, 0, 1, 1, 1])
    with pytest.raises(ValueError):
        project([0, 1, 1], mp)


@given(graphs(max_n=24), st.integers(1, 10), st.data())
def test_cut_preservation_exhaustive(g, nclusters, data):
    clusters = np.asarray(data.draw(st.lists(st.integers(0, nclusters - 1), min_size=g.n, max_size=g.n)))
    coarse, mp = contract(g, clusters)
    if coarse.n <= 8:
        candidates = itertools.product(range(2), repeat=coarse.n)
    else:
        candidates = (np.random.default_rng(i).integers(0, 3, coarse.n) for i in range(64))
    for x in candidates:
        x = np.asarray(x, dtype=np.int64)
        a, b = evaluate(coarse, x, 3), evaluate(g, project(x, mp), 3)
        assert a.cut == b.cut
        assert np.array_equal(a.block_weights, b.block_weights)


@given(graphs(max_n=40), st.integers(1, 12), st.data())
def test_weight_conservation(g, nclusters, data):
    clusters = np.asarray(data.draw(st.lists(st.integers(0, nclusters - 1), min_size=g.n, max_size=g.n)))
    coarse, mp = contract(g, clusters)
    assert coarse.total_weight == g.total_weight
    su, sv, sw = g.edges()
    intra = int(sw[clusters[su] == clusters[sv]].sum())
    assert coarse.total_edge_weight == g.total_edge_weight - intra
    assert np.array_equal(np.bincount(mp.fine_to_coarse, weights=g.vwgt), coarse.vwgt)


@given(graphs(max_vw=4), st.integers(0, 6), st.integers(0, 2**32))
def test_coarse_node_weights_within_cluster_bound(g, extra, seed):
    bound = int(g.vwgt.max()) + extra
    clusters, _ = label_propagation(g, LpMode(CLUSTER, bound), seed)
    coarse, _ = contract(g, clusters)
    assert coarse.vwgt.max() <= bound


def test_restrict_partition_pushes_blocks_down():
    _, mp = contract(bridged_triangles(), [0, 0, 0, 1, 1, 1])
    assert restrict_partition([1, 1, 1, 0, 0, 0], mp).tolist() == [1, 0]
    with pytest.raises(ValueError):
        restrict_partition([1, 1, 0, 0, 0, 0], mp)
