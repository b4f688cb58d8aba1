import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lpgp.graph import Graph, lmax_bound
from lpgp.oracle import brute_force_partition
from support import bridged_triangles, graphs, path, random_graph


def reversed_enumeration(graph, k, epsilon):
    """Independent oracle: walk the labelings in reverse order with plain
    Python loops, keeping every optimum."""
    bound = lmax_bound(graph.total_weight, k, epsilon)
    su, sv, sw = (a.tolist() for a in graph.edges())
    vw = graph.vwgt.tolist()
    best, winners = None, []
    for labels in itertools.product(range(k - 1, -1, -1), repeat=graph.n):
        loads = [0] * k
        for v, b in enumerate(labels):
            loads[b] += vw[v]
        if max(loads) > bound:
            continue
        cut = sum(w for u, v, w in zip(su, sv, sw) if labels[u] != labels[v])
        if best is None or cut < best:
            best, winners = cut, [labels]
        elif cut == best:
            winners.append(labels)
    return best, winners


def test_path():
    cut, labels = brute_force_partition(path(4), 2, 0.0)
    assert cut == 1 and labels.tolist() == [0, 0, 1, 1]


def test_bridged_triangles():
    cut, labels = brute_force_partition(bridged_triangles(), 2, 0.0)
    assert cut == 1 and labels.tolist() == [0, 0, 0, 1, 1, 1]


def test_infeasible_instance():
    g = Graph.from_edges(2, [0], [1], vwgt=[5, 1])
    assert brute_force_partition(g, 2, 0.0) == (None, None)


def test_refuses_large_graphs():
    with pytest.raises(ValueError, match="12"):
        brute_force_partition(random_graph(13, 0.3, seed=0), 2, 0.03)


def test_twelve_nodes_enumerates_past_one_chunk():
    g = random_graph(12, 0.3, seed=1, max_w=4)
    cut, labels = brute_force_partition(g, 3, 0.03)   # 3^12 > 2^16 labelings
    ref, winners = reversed_enumeration(g, 3, 0.03)
    assert cut == ref and tuple(labels.tolist()) == min(winners)


@given(graphs(max_n=8, max_w=4, max_vw=3), st.integers(1, 3), st.sampled_from([0.0, 0.03, 0.5]))
def test_matches_independent_enumeration(g, k, eps):
    cut, labels = brute_force_partition(g, k, eps)
    ref, winners = reversed_enumeration(g, k, eps)
    assert cut == ref
    if ref is not None:
        assert tuple(labels.tolist()) == min(winners)


@pytest.mark.parametrize("seed", range(4))
def test_matches_independent_enumeration_at_ten_nodes(seed):
    g = random_graph(10, 0.35, seed=seed, max_w=3, max_vw=2)
    cut, labels = brute_force_partition(g, 2, 0.03)
    ref, winners = reversed_enumeration(g, 2, 0.03)
    assert cut == ref and tuple(labels.tolist()) == min(winners)
