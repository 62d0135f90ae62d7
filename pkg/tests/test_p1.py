import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qaoa_maxcut.graph import EdgeLocalEnv, Graph, edge_local_env, erdos_renyi_graph, ring_graph
from qaoa_maxcut.optimize import finite_diff_gradient
from qaoa_maxcut.p1 import (
    edge_expectation_p1,
    edge_expectation_record,
    graph_expectation_p1,
    graph_expectation_p1_by_edge,
    regular_ratio,
    regular_triangle_free_optimum,
)
from qaoa_maxcut.schedule import AngleSchedule, Convention
from qaoa_maxcut.statevector import edge_expectations, simulate_expectation

PI = math.pi
angles = st.floats(-2 * PI, 2 * PI, allow_nan=False)


def local_graph(d, e, f):
    """Edge (0, 1) with f shared neighbours and d-f, e-f private ones."""
    edges = [(0, 1)]
    nxt = 2
    for _ in range(f):
        edges += [(0, nxt), (1, nxt)]
        nxt += 1
    for _ in range(d - f):
        edges.append((0, nxt))
        nxt += 1
    for _ in range(e - f):
        edges.append((1, nxt))
        nxt += 1
    return Graph.from_edges(edges, nxt)


def test_ring_edge_at_known_optimum():
    assert edge_expectation_p1(EdgeLocalEnv(1, 1, 0), PI / 4, PI / 8) == pytest.approx(0.75, abs=1e-15)


def test_three_regular_triangle_free_value():
    value = edge_expectation_p1(EdgeLocalEnv(2, 2, 0), math.atan(1 / math.sqrt(2)), PI / 8)
    assert value == pytest.approx(0.5 * (1 + (2 / 3) / math.sqrt(3)), abs=1e-15)
    assert value == pytest.approx(0.69245, abs=1e-5)


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6), angles)
def test_zero_angle_gives_half(d, e, f, x):
    f = min(f, d, e)
    env = EdgeLocalEnv(d, e, f)
    assert edge_expectation_p1(env, 0.0, x) == pytest.approx(0.5, abs=1e-15)
    assert edge_expectation_p1(env, x, 0.0) == pytest.approx(0.5, abs=1e-15)


@settings(max_examples=200)
@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8), angles, angles)
def test_value_is_a_probability_and_symmetric(d, e, f, gamma, beta):
    f = min(f, d, e)
    a = edge_expectation_p1(EdgeLocalEnv(d, e, f), gamma, beta)
    assert -1e-12 <= a <= 1 + 1e-12
    assert a == edge_expectation_p1(EdgeLocalEnv(e, d, f), gamma, beta)


@given(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5), angles, angles)
def test_periodicity(d, e, f, gamma, beta):
    env = EdgeLocalEnv(d, e, min(f, d, e))
    a = edge_expectation_p1(env, gamma, beta)
    assert edge_expectation_p1(env, gamma + 2 * PI, beta) == pytest.approx(a, abs=1e-13)
    assert edge_expectation_p1(env, gamma, beta + PI) == pytest.approx(a, abs=1e-13)


@pytest.mark.parametrize("seed", range(8))
def test_dense_triangle_env_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    f = int(rng.integers(3, 5))
    d = f + int(rng.integers(0, 3))
    e = f + int(rng.integers(0, 3))
    g = local_graph(d, e, f)
    assert edge_local_env(g, (0, 1)) == EdgeLocalEnv(d, e, f)
    gamma, beta = rng.uniform(-PI, PI, 2)
    sched = AngleSchedule((gamma,), (beta,), Convention.MAXCUT)
    oracle = edge_expectations(g, sched)[g.edges.index((0, 1))]
    assert edge_expectation_p1(EdgeLocalEnv(d, e, f), gamma, beta) == pytest.approx(oracle, abs=1e-12)


def test_ring8_total():
    assert graph_expectation_p1(ring_graph(8), PI / 4, PI / 8) == pytest.approx(6.0, abs=1e-12)


def test_zero_gamma_total():
    g = erdos_renyi_graph(12, 0.3, seed=4)
    assert graph_expectation_p1(g, 0.0, 0.7) == pytest.approx(g.n_edges / 2, abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_graph_total_matches_oracle_and_edge_sum(seed):
    rng = np.random.default_rng(100 + seed)
    g = erdos_renyi_graph(int(rng.integers(2, 11)), 0.5, seed=seed)
    gamma, beta = rng.uniform(-PI, PI, 2)
    total = graph_expectation_p1(g, gamma, beta)
    assert total == pytest.approx(graph_expectation_p1_by_edge(g, gamma, beta), abs=1e-12)
    oracle = simulate_expectation(g, AngleSchedule((gamma,), (beta,), Convention.MAXCUT))
    assert abs(total - oracle) < 1e-9


def test_broadcasts_over_grids():
    gam, bet = np.meshgrid(np.linspace(0, 1, 5), np.linspace(0, 1, 4))
    grid = graph_expectation_p1(ring_graph(6), gam, bet)
    assert grid.shape == (4, 5)
    assert grid[2, 3] == pytest.approx(graph_expectation_p1(ring_graph(6), gam[2, 3], bet[2, 3]))


def test_record_keeps_inputs():
    rec = edge_expectation_record(EdgeLocalEnv(1, 1, 0), PI / 4, PI / 8)
    assert rec.value == pytest.approx(0.75)
    assert rec.env == EdgeLocalEnv(1, 1, 0)


def test_regular_optimum_examples():
    one = regular_triangle_free_optimum(1)
    assert one.ratio == pytest.approx(0.75, abs=1e-15)
    assert one.gamma_star == pytest.approx(PI / 4, abs=1e-15)
    assert one.beta_star == pytest.approx(PI / 8, abs=1e-15)
    assert regular_triangle_free_optimum(2).ratio == pytest.approx(0.6925, abs=1e-4)
    zero = regular_triangle_free_optimum(0)
    assert zero.ratio == 1.0
    assert edge_expectation_p1(EdgeLocalEnv(0, 0, 0), zero.gamma_star, zero.beta_star) == pytest.approx(1.0)


@pytest.mark.parametrize("d", range(0, 13))
def test_regular_optimum_consistency(d):
    opt = regular_triangle_free_optimum(d)
    assert opt.ratio > 0.5
    assert opt.ratio > 0.5 * (1 + math.exp(-0.5) / math.sqrt(d + 1))
    env = EdgeLocalEnv(d, d, 0)
    assert edge_expectation_p1(env, opt.gamma_star, opt.beta_star) == pytest.approx(opt.ratio, abs=1e-14)
    assert regular_ratio(d) == opt.ratio


@pytest.mark.parametrize("d", range(1, 9))
def test_regular_optimum_is_stationary(d):
    env = EdgeLocalEnv(d, d, 0)
    opt = regular_triangle_free_optimum(d)
    grad = finite_diff_gradient(lambda x: edge_expectation_p1(env, x[0], x[1]), [opt.gamma_star, opt.beta_star])
    assert np.linalg.norm(grad) < 1e-6
