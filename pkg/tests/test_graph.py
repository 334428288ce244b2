"""Graph construction, threshold schedule, and clique enumeration contracts."""

import math

import numpy as np
import pytest

from cliqueadapt.core import Space
from cliqueadapt.errors import NonUnitNode, WrongOrder
from cliqueadapt.graph import (
    GraphOrder,
    ThresholdSchedule,
    advance_threshold,
    build_fog,
    build_sog,
    maximal_cliques,
)

from helpers import (
    brute_force_maximal_cliques,
    graph_from_adjacency,
    random_adjacency,
    random_unit_rows,
)


def edge_set(graph):
    i, j = np.nonzero(np.triu(graph.adjacency, k=1))
    return {(int(a), int(b)) for a, b in zip(i, j)}


class TestBuildFog:
    def test_threshold_one_gives_empty_graph(self):
        rng = np.random.default_rng(0)
        g = build_fog(random_unit_rows(rng, 6, 4), 1.0, Space.CSS)
        assert not g.adjacency.any()

    def test_threshold_below_minimum_gives_complete_graph(self):
        rng = np.random.default_rng(1)
        g = build_fog(random_unit_rows(rng, 4, 4), -1.0, Space.CSS)
        expected = ~np.eye(4, dtype=bool)
        np.testing.assert_array_equal(g.adjacency, expected)

    def test_three_node_example(self):
        nodes = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        nodes[2] /= math.sqrt(2.0)
        g = build_fog(nodes, 0.5, Space.CSS)
        assert edge_set(g) == {(0, 2), (1, 2)}

    def test_strict_inequality_on_boundary(self):
        nodes = np.array([[1.0, 0.0], [0.0, 1.0]])
        g = build_fog(nodes, 0.0, Space.CSS)  # cosine exactly 0 is not > 0
        assert not g.adjacency.any()

    def test_rejects_non_unit_rows(self):
        with pytest.raises(NonUnitNode):
            build_fog(np.array([[1.0, 0.0], [2.0, 0.0]]), 0.5, Space.CSS)

    def test_symmetric_zero_diagonal(self):
        rng = np.random.default_rng(2)
        g = build_fog(random_unit_rows(rng, 8, 3), 0.1, Space.AFV)
        np.testing.assert_array_equal(g.adjacency, g.adjacency.T)
        assert not g.adjacency.diagonal().any()

    def test_raising_threshold_never_adds_edges(self):
        rng = np.random.default_rng(3)
        nodes = random_unit_rows(rng, 10, 4)
        for _ in range(20):
            lo, hi = sorted(rng.uniform(0, 1, size=2))
            e_lo = build_fog(nodes, lo, Space.CSS).adjacency
            e_hi = build_fog(nodes, hi, Space.CSS).adjacency
            assert not (e_hi & ~e_lo).any()


class TestBuildSog:
    def test_triangle_survives(self):
        # hand evaluation of A * (A @ A) for K3: every edge lies on a 2-path
        fog = graph_from_adjacency(~np.eye(3, dtype=bool))
        sog = build_sog(fog)
        np.testing.assert_array_equal(sog.adjacency, fog.adjacency)

    def test_path_of_three_empties(self):
        adj = np.zeros((3, 3), dtype=bool)
        adj[0, 1] = adj[1, 0] = adj[1, 2] = adj[2, 1] = True
        sog = build_sog(graph_from_adjacency(adj))
        assert not sog.adjacency.any()

    def test_empty_stays_empty(self):
        sog = build_sog(graph_from_adjacency(np.zeros((4, 4), dtype=bool)))
        assert not sog.adjacency.any()

    def test_requires_first_order_input(self):
        fog = graph_from_adjacency(~np.eye(3, dtype=bool))
        sog = build_sog(fog)
        assert sog.order is GraphOrder.SECOND
        with pytest.raises(WrongOrder):
            build_sog(sog)

    def test_contained_in_fog(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            n = int(rng.integers(2, 12))
            adj = random_adjacency(rng, n, float(rng.choice([0.2, 0.5, 0.8])))
            fog = graph_from_adjacency(adj)
            sog = build_sog(fog)
            assert not (sog.adjacency & ~fog.adjacency).any()

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_complete_graph_fixed_point(self, n):
        fog = graph_from_adjacency(~np.eye(n, dtype=bool))
        np.testing.assert_array_equal(build_sog(fog).adjacency, fog.adjacency)


class TestThresholdSchedule:
    def test_zero_growth_is_constant(self):
        sched = ThresholdSchedule(t0=0.3, growth=0.0)
        assert [advance_threshold(sched) for _ in range(5)] == [0.3] * 5

    def test_linear_growth(self):
        sched = ThresholdSchedule(t0=0.3, growth=0.001, i=100)
        assert sched.current() == pytest.approx(0.4)
        sched2 = ThresholdSchedule(t0=0.3, growth=0.001)
        values = [advance_threshold(sched2) for _ in range(101)]
        assert values[100] == pytest.approx(0.4)

    def test_caps_at_one(self):
        sched = ThresholdSchedule(t0=0.9, growth=0.01, i=50)
        assert sched.current() == 1.0

    def test_nondecreasing_and_bounded(self):
        sched = ThresholdSchedule(t0=0.2, growth=0.03)
        values = [advance_threshold(sched) for _ in range(60)]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert all(v <= 1.0 for v in values)


class TestMaximalCliques:
    def test_triangle_plus_isolated_node(self):
        adj = np.zeros((4, 4), dtype=bool)
        for a, b in [(0, 1), (0, 2), (1, 2)]:
            adj[a, b] = adj[b, a] = True
        out = maximal_cliques(graph_from_adjacency(adj))
        assert out.cliques == [(0, 1, 2), (3,)]
        assert set(out.cliques) == brute_force_maximal_cliques(adj)

    def test_empty_graph_gives_singletons(self):
        out = maximal_cliques(graph_from_adjacency(np.zeros((3, 3), dtype=bool)))
        assert out.cliques == [(0,), (1,), (2,)]

    def test_four_cycle(self):
        adj = np.zeros((4, 4), dtype=bool)
        for a, b in [(0, 1), (1, 2), (2, 3), (0, 3)]:
            adj[a, b] = adj[b, a] = True
        out = maximal_cliques(graph_from_adjacency(adj))
        assert set(out.cliques) == {(0, 1), (1, 2), (2, 3), (0, 3)}
        assert set(out.cliques) == brute_force_maximal_cliques(adj)

    def test_matches_brute_force_on_random_graphs(self):
        rng = np.random.default_rng(5)
        for trial in range(60):
            n = int(rng.integers(1, 13))
            p = float(rng.choice([0.2, 0.5, 0.8]))
            adj = random_adjacency(rng, n, p)
            got = set(maximal_cliques(graph_from_adjacency(adj)).cliques)
            assert got == brute_force_maximal_cliques(adj), f"trial {trial}"

    def test_clique_cover(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            n = int(rng.integers(1, 14))
            adj = random_adjacency(rng, n, float(rng.random()))
            out = maximal_cliques(graph_from_adjacency(adj))
            assert out.covered_nodes() == set(range(n))

    def test_deterministic_sorted_output(self):
        rng = np.random.default_rng(7)
        adj = random_adjacency(rng, 10, 0.5)
        a = maximal_cliques(graph_from_adjacency(adj)).cliques
        b = maximal_cliques(graph_from_adjacency(adj)).cliques
        assert a == b
        assert a == sorted(a)
