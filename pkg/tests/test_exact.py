import numpy as np
import pytest

from maxcutbench.exact import InstanceTooLarge, branch_and_bound, brute_force
from maxcutbench.graph import Graph, cut_value
from oracles import dense_weights, naive_maxcut, random_edges

TRIANGLE = Graph.from_edges(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
K4 = Graph.from_edges(4, [(i, j, 1) for i in range(4) for j in range(i + 1, 4)])


def test_triangle():
    r = brute_force(TRIANGLE)
    assert r.optimum == 2 and cut_value(TRIANGLE, r.witness) == 2
    assert r.nodes_explored == 4 and r.method == "brute-force"
    b = branch_and_bound(TRIANGLE)
    assert b.optimum == 2 and b.optimal


def test_k4():
    assert brute_force(K4).optimum == 4
    assert branch_and_bound(K4).optimum == 4


def test_limit():
    with pytest.raises(InstanceTooLarge):
        brute_force(Graph.from_edges(31, []))


def test_degenerate_sizes():
    assert brute_force(Graph.from_edges(0, [])).optimum == 0
    assert brute_force(Graph.from_edges(1, [])).optimum == 0
    assert branch_and_bound(Graph.from_edges(1, [])).optimum == 0


def test_brute_force_matches_naive_enumeration(rng):
    for _ in range(200):
        n = int(rng.integers(1, 11))
        edges = random_edges(rng, n)
        g = Graph.from_edges(n, edges)
        r = brute_force(g)
        assert r.optimum == naive_maxcut(dense_weights(n, edges))
        assert cut_value(g, r.witness) == r.optimum
        assert r.witness[0] == 1


def test_all_negative_weights_certify_zero(rng):
    for _ in range(30):
        n = int(rng.integers(2, 15))
        g = Graph.from_edges(n, random_edges(rng, n, low=-10, high=-1))
        assert brute_force(g).optimum == 0
        b = branch_and_bound(g)
        assert b.optimum == 0 and b.optimal


def test_bb_matches_brute_force(rng):
    for _ in range(100):
        n = int(rng.integers(2, 21))
        g = Graph.from_edges(n, random_edges(rng, n, density=float(rng.uniform(0.1, 0.6))))
        b = branch_and_bound(g)
        assert b.optimal
        assert b.optimum == brute_force(g).optimum
        assert cut_value(g, b.witness) == b.optimum


def test_bb_timeout_returns_incumbent(rng):
    g = Graph.from_edges(40, random_edges(rng, 40, density=0.9))
    b = branch_and_bound(g, time_limit=0.0)
    assert not b.optimal
    assert cut_value(g, b.witness) == b.optimum


def test_gauge_symmetry(rng):
    for _ in range(20):
        n = int(rng.integers(2, 12))
        g = Graph.from_edges(n, random_edges(rng, n))
        r = brute_force(g)
        assert cut_value(g, -r.witness) == r.optimum


def test_adding_cut_edge_raises_optimum_on_witness(rng):
    for _ in range(20):
        n = int(rng.integers(3, 12))
        edges = random_edges(rng, n)
        g = Graph.from_edges(n, edges)
        r = brute_force(g)
        present = {(i, j) for i, j, _ in edges}
        cross = [(i, j) for i in range(n) for j in range(i + 1, n)
                 if r.witness[i] != r.witness[j] and (i, j) not in present]
        if not cross:
            continue
        i, j = cross[0]
        g2 = Graph.from_edges(n, edges + [(i, j, 5)])
        assert cut_value(g2, r.witness) == r.optimum + 5
        assert brute_force(g2).optimum == r.optimum + 5


def test_first_optimum_is_returned():
    # every cut of the empty graph is optimal; the all-plus start comes first
    r = brute_force(Graph.from_edges(5, []))
    assert r.witness.tolist() == [1] * 5
