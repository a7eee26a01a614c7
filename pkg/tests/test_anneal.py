import math

import numpy as np
import pytest

from maxcutbench.anneal import (
    SaRunConfig,
    SaSchedule,
    accept_probability,
    greedy_descent,
    metropolis_accept,
    restart_rng,
    sa1_preset,
    sa2_preset,
    sa_solve,
)
from maxcutbench.exact import brute_force
from maxcutbench.graph import Graph, cut_delta, cut_value
from oracles import random_edges

TRIANGLE = Graph.from_edges(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])


def count_levels(t0, d, t_min, linear=False):
    """Step the temperature exactly as the annealer does and count levels."""
    t, k = t0, 0
    while t >= t_min:
        k += 1
        t = t - d if linear else t * (1.0 - d)
    return k


def test_presets():
    assert sa1_preset().initial_temp == 10_000
    assert sa1_preset().decrement == 2e-4
    assert sa2_preset().initial_temp == 40_000
    assert sa2_preset().decrement == 2e-6
    assert sa1_preset().moves_per_temp == sa2_preset().moves_per_temp == 1


def test_sa1_move_count():
    s = sa1_preset(min_temp=0.125)
    assert s.total_moves() == math.ceil(math.log(0.125 / 10000) / math.log(1 - 2e-4))
    assert s.total_moves() == 56_444
    assert s.total_moves() == count_levels(10_000.0, 2e-4, 0.125)


def test_sa2_move_count():
    assert sa2_preset().total_moves() == count_levels(40_000.0, 2e-6, 0.125)


def test_linear_move_count():
    s = SaSchedule(10.0, 0.5, min_temp=1.0, cooling="linear", moves_per_temp=3)
    assert s.temperature_levels() == count_levels(10.0, 0.5, 1.0, linear=True) == 19
    assert s.total_moves() == 57


@pytest.mark.parametrize("kwargs", [
    dict(initial_temp=1.0, decrement=0.1, min_temp=2.0),
    dict(initial_temp=10.0, decrement=1.5),
    dict(initial_temp=10.0, decrement=0.0),
    dict(initial_temp=10.0, decrement=0.1, min_temp=0.0),
    dict(initial_temp=10.0, decrement=0.1, moves_per_temp=0),
    dict(initial_temp=10.0, decrement=0.1, cooling="log"),
])
def test_invalid_schedule(kwargs):
    with pytest.raises(ValueError):
        SaSchedule(**kwargs)


def test_invalid_run_config():
    with pytest.raises(ValueError):
        SaRunConfig(sa1_preset(), restarts=0)


def test_edgeless_graph():
    r = sa_solve(Graph.from_edges(5, []), SaRunConfig(sa1_preset()))
    assert r.best_value == 0


@pytest.mark.parametrize("seed", [0, 7])
def test_triangle_sa2(seed):
    r = sa_solve(TRIANGLE, SaRunConfig(sa2_preset(), seed=seed))
    assert r.best_value == 2 == brute_force(TRIANGLE).optimum


def test_result_invariants_and_determinism(rng):
    for _ in range(10):
        n = int(rng.integers(2, 15))
        g = Graph.from_edges(n, random_edges(rng, n))
        cfg = SaRunConfig(sa1_preset(), seed=int(rng.integers(1 << 32)), restarts=2)
        a = sa_solve(g, cfg)
        b = sa_solve(g, cfg)
        assert a.best_value == b.best_value
        assert np.array_equal(a.best_assignment, b.best_assignment)
        assert (a.moves_attempted, a.moves_accepted) == (b.moves_attempted, b.moves_accepted)
        assert cut_value(g, a.best_assignment) == a.best_value
        assert a.moves_accepted <= a.moves_attempted == 2 * sa1_preset().total_moves()
        assert a.best_value <= brute_force(g).optimum
        assert a.best_value == max(a.restart_values)


def test_sa1_mostly_optimal_on_small_graphs(rng):
    hits = 0
    for k in range(40):
        n = int(rng.integers(2, 15))
        g = Graph.from_edges(n, random_edges(rng, n))
        r = sa_solve(g, SaRunConfig(sa1_preset(), seed=k, restarts=3))
        hits += r.best_value == brute_force(g).optimum
    assert hits >= 36


def test_zero_temperature_limit_is_locally_optimal(rng):
    cold = SaSchedule(initial_temp=1e-3, decrement=1e-4, min_temp=1e-4)
    for k in range(20):
        n = int(rng.integers(2, 15))
        g = Graph.from_edges(n, random_edges(rng, n))
        r = sa_solve(g, SaRunConfig(cold, seed=k))
        assert all(cut_delta(g, r.best_assignment, i) <= 0 for i in range(n))


def test_polish_gives_local_optimum(rng):
    g = Graph.from_edges(60, random_edges(rng, 60, density=0.2))
    short = SaSchedule(initial_temp=50.0, decrement=0.05)
    r = sa_solve(g, SaRunConfig(short, seed=3, polish=True))
    assert cut_value(g, r.best_assignment) == r.best_value
    assert all(cut_delta(g, r.best_assignment, i) <= 0 for i in range(g.n))


def test_gauge_equivariance(rng):
    for k in range(10):
        n = int(rng.integers(2, 15))
        g = Graph.from_edges(n, random_edges(rng, n))
        x0 = rng.choice([-1, 1], size=n)
        a = sa_solve(g, SaRunConfig(sa1_preset(), seed=k, init=x0))
        b = sa_solve(g, SaRunConfig(sa1_preset(), seed=k, init=-x0))
        assert a.best_value == b.best_value
        assert a.moves_accepted == b.moves_accepted


def test_all_plus_init():
    g = Graph.from_edges(2, [(0, 1, -3)])
    r = sa_solve(g, SaRunConfig(SaSchedule(1.0, 0.5, min_temp=0.9), init="all-plus"))
    assert r.best_value == 0


def test_restart_streams_are_distinct():
    draws = {(s, r): restart_rng(s, r).integers(1 << 62) for s in range(4) for r in range(4)}
    assert len(set(draws.values())) == len(draws)


def test_acceptance_rule_edges():
    assert metropolis_accept(0, 1.0, 0.999999)
    assert metropolis_accept(5, 1.0, 0.999999)
    assert not metropolis_accept(-50, 100.0, 0.61)
    assert metropolis_accept(-50, 100.0, 0.60)
    assert accept_probability(-50, 100.0) == pytest.approx(math.exp(-0.5))


@pytest.mark.parametrize("delta, temp", [(-1, 1.0), (-3, 10.0), (-20, 5.0)])
def test_acceptance_frequency(delta, temp):
    gen = np.random.default_rng(11)
    trials = 100_000
    hits = sum(metropolis_accept(delta, temp, u) for u in gen.random(trials))
    p = math.exp(delta / temp)
    sigma = math.sqrt(p * (1 - p) / trials)
    assert abs(hits / trials - p) <= 3 * sigma + 1e-12


def test_greedy_fixed_point_at_optimum(rng):
    for _ in range(10):
        n = int(rng.integers(2, 12))
        g = Graph.from_edges(n, random_edges(rng, n))
        opt = brute_force(g)
        r = greedy_descent(g, opt.witness)
        assert np.array_equal(r.best_assignment, opt.witness)
        assert r.best_value == opt.optimum


def test_greedy_triangle():
    assert greedy_descent(TRIANGLE, [1, 1, 1]).best_value == 2


def test_greedy_is_one_flip_local_max(rng):
    for _ in range(50):
        n = int(rng.integers(1, 30))
        g = Graph.from_edges(n, random_edges(rng, n, density=0.4))
        x0 = rng.choice([-1, 1], size=n)
        r = greedy_descent(g, x0)
        assert r.best_value >= cut_value(g, x0)
        assert cut_value(g, r.best_assignment) == r.best_value
        assert all(cut_delta(g, r.best_assignment, i) <= 0 for i in range(n))
