"""
Tests for the brute-force oracles and the differential sweep.
"""

import unittest
from unittest.mock import patch

import networkx as nx
import pytest

from diameter_coloring.config import SolverMode
from diameter_coloring.core.graph import Graph, is_connected
from diameter_coloring.core.instance import ColoringInstance
from diameter_coloring.core.outcome import SearchOutcome, SearchStats, Verdict
from diameter_coloring.exceptions import ArgumentError, OracleRefusal
from diameter_coloring.modules.generator import ListMode
from diameter_coloring.modules.homomorphism import HomInstance, TargetGraph
from diameter_coloring.modules.homomorphism_solver import HomomorphismSolver
from diameter_coloring.modules.list_coloring_solver import ListColoringSolver
from diameter_coloring.modules.oracle import (
    DEFAULT_SWEEP_MODES,
    SweepConfig,
    brute_color,
    brute_hom,
    connected_graphs,
    differential_sweep,
    minimize,
)


def instance(g: nx.Graph, lists=None) -> ColoringInstance:
    return ColoringInstance(Graph.from_networkx(g), lists)


class TestBruteColor(unittest.TestCase):
    def test_counts(self):
        self.assertEqual(brute_color(instance(nx.cycle_graph(5))).count, 30)
        self.assertEqual(brute_color(instance(nx.complete_graph(4))).count, 0)
        self.assertEqual(brute_color(ColoringInstance(Graph(1, [0]))).count, 3)
        self.assertEqual(brute_color(instance(nx.path_graph(3), [[1], [1, 2], [1, 2, 3]])).count, 2)

    def test_witness_is_lexicographically_first(self):
        report = brute_color(instance(nx.cycle_graph(5)))
        self.assertEqual(report.verdict, Verdict.SAT)
        self.assertEqual(report.witness, (1, 2, 1, 2, 3))
        self.assertTrue(report.is_sat)

    def test_unsat_has_no_witness(self):
        report = brute_color(instance(nx.complete_graph(4)), count_all=False)
        self.assertEqual(report.verdict, Verdict.UNSAT)
        self.assertIsNone(report.witness)
        self.assertIsNone(report.count)

    def test_cap(self):
        with self.assertRaises(OracleRefusal):
            brute_color(instance(nx.cycle_graph(5)), cap=3**4)
        self.assertEqual(brute_color(instance(nx.cycle_graph(5)), cap=3**5).count, 30)

    def test_threads_do_not_change_the_answer(self):
        inst = instance(nx.petersen_graph())
        single = brute_color(inst)
        pooled = brute_color(inst, threads=3)
        self.assertEqual(single, pooled)
        first = brute_color(inst, count_all=False, threads=3)
        self.assertEqual(first.witness, single.witness)
        self.assertIsNone(first.count)


class TestBruteHom(unittest.TestCase):
    def test_counts(self):
        edge = Graph.from_edges(2, [(0, 1)])
        self.assertEqual(brute_hom(HomInstance(edge, TargetGraph.cycle(3))).count, 6)
        k3 = Graph.from_networkx(nx.complete_graph(3))
        self.assertEqual(brute_hom(HomInstance(k3, TargetGraph.cycle(5))).count, 0)
        self.assertEqual(brute_hom(HomInstance(Graph(1, [0]), TargetGraph.cycle(5))).count, 5)

    def test_loops_allow_equal_ends(self):
        edge = Graph.from_edges(2, [(0, 1)])
        report = brute_hom(HomInstance(edge, TargetGraph.looped_path(3)))
        # Four ordered path edges plus the two loops.
        self.assertEqual(report.count, 6)
        self.assertEqual(report.witness, (0, 0))

    def test_cap(self):
        inst = HomInstance(Graph.from_networkx(nx.cycle_graph(5)), TargetGraph.cycle(6))
        with self.assertRaises(OracleRefusal):
            brute_hom(inst, cap=6**4)


class TestConnectedGraphs(unittest.TestCase):
    def test_counts_of_labeled_connected_graphs(self):
        self.assertEqual([sum(1 for _ in connected_graphs(n)) for n in range(1, 5)], [1, 1, 4, 38])

    def test_all_connected(self):
        self.assertTrue(all(is_connected(g) for g in connected_graphs(4)))


class TestMinimize(unittest.TestCase):
    def test_shrinks_to_the_obstruction(self):
        g = nx.complete_graph(4)
        g.add_edge(0, 4)
        smallest = minimize(
            instance(g),
            still_failing=lambda c: not brute_color(c, count_all=False).is_sat,
            admissible=lambda c: is_connected(c.graph),
        )
        self.assertEqual(smallest.vertex_count, 4)
        self.assertEqual(smallest.graph.edge_count, 6)

    def test_lists_follow_their_vertices(self):
        lists = [[3], [1], [1, 2], [2]]
        g = nx.path_graph(4)
        g.add_edge(1, 3)
        smallest = minimize(
            instance(g, lists),
            still_failing=lambda c: not brute_color(c, count_all=False).is_sat,
            admissible=lambda c: is_connected(c.graph),
        )
        self.assertEqual(smallest.vertex_count, 3)
        self.assertEqual(smallest.graph.edge_count, 2)
        self.assertEqual([sorted(smallest.list_of(v)) for v in range(3)], [[1], [1, 2], [2]])


class TestDifferentialSweep(unittest.TestCase):
    def test_small_sweep_agrees(self):
        report = differential_sweep(SweepConfig(max_vertices=3, lists_per_graph=2))
        self.assertTrue(report.ok, report.summary_lines())
        self.assertEqual(report.instances_compared, 18)
        self.assertEqual(report.runs, 72)
        self.assertEqual(report.progress_violations, 0)

    def test_random_instances_and_targets(self):
        config = SweepConfig(
            max_vertices=0,
            random_diam2=3,
            random_max_n=6,
            targets=("C5", "PSTAR3"),
            hom_max_vertices=3,
            lists_per_graph=1,
        )
        report = differential_sweep(config)
        self.assertTrue(report.ok, report.summary_lines())
        self.assertEqual(report.instances_compared, 3 + 24)

    def test_empty_sweep(self):
        report = differential_sweep(SweepConfig(max_vertices=0))
        self.assertEqual(report.instances_compared, 0)
        self.assertTrue(report.ok)
        self.assertIn("instances=0", report.summary_lines())

    def test_sweep_is_deterministic(self):
        config = SweepConfig(max_vertices=2, random_diam2=2, random_max_n=5, rng_seed=4)
        self.assertEqual(differential_sweep(config).summary_lines(), differential_sweep(config).summary_lines())

    def test_invalid_sizes(self):
        with self.assertRaises(ArgumentError):
            SweepConfig(max_vertices=-1)
        with self.assertRaises(ArgumentError):
            SweepConfig(random_diam2=1, random_max_n=2)

    def test_disagreements_are_minimized(self):
        wrong = SearchOutcome(Verdict.UNSAT, None, SearchStats())
        config = SweepConfig(max_vertices=2, lists_per_graph=0, modes=(SolverMode.COMPLETE,))
        with patch.object(ListColoringSolver, "solve", return_value=wrong):
            report = differential_sweep(config)
        self.assertFalse(report.ok)
        self.assertEqual(len(report.disagreements), 2)
        item = report.disagreements[1]
        self.assertEqual((item.solver, item.expected, item.actual), ("complete", "SAT", "UNSAT"))
        self.assertEqual(item.original_text, "p col 2 1\ne 1 2\n")
        self.assertEqual(item.instance_text, "p col 0 0\n")
        self.assertIn("disagreement solver=complete expected=SAT actual=UNSAT", report.summary_lines())

    def test_homomorphism_runs_cover_every_mode(self):
        config = SweepConfig(max_vertices=0, targets=("C5",), hom_max_vertices=2, lists_per_graph=0)
        report = differential_sweep(config)
        self.assertTrue(report.ok, report.summary_lines())
        self.assertEqual(report.instances_compared, 2)
        self.assertEqual(report.runs, 2 * len(DEFAULT_SWEEP_MODES))

    def test_homomorphism_disagreements_name_the_mode(self):
        wrong = SearchOutcome(Verdict.UNSAT, None, SearchStats())
        config = SweepConfig(
            max_vertices=0,
            targets=("C3",),
            hom_max_vertices=1,
            lists_per_graph=0,
            modes=(SolverMode.COMPLETE, SolverMode.RANDOMIZED),
        )
        with patch.object(HomomorphismSolver, "solve", return_value=wrong):
            report = differential_sweep(config)
        self.assertEqual(report.runs, 2)
        self.assertEqual(
            [(item.solver, item.expected, item.actual) for item in report.disagreements],
            [("hom:C3:complete", "SAT", "UNSAT"), ("hom:C3:randomized", "SAT", "UNSAT")],
        )

    @pytest.mark.slow
    def test_exhaustive_small_graphs(self):
        # 772 labeled connected graphs on at most 5 vertices, full lists plus 50 list sets each
        config = SweepConfig(max_vertices=5, lists_per_graph=50, modes=DEFAULT_SWEEP_MODES)
        report = differential_sweep(config)
        self.assertTrue(report.ok, report.summary_lines())
        self.assertEqual(report.instances_compared, 772 * 51)

    @pytest.mark.slow
    def test_random_diameter_two_instances(self):
        config = SweepConfig(
            max_vertices=0,
            random_diam2=500,
            random_max_n=12,
            list_mode=ListMode.RANDOM_NONEMPTY,
            modes=tuple(SolverMode),
        )
        report = differential_sweep(config)
        self.assertTrue(report.ok, report.summary_lines())
        self.assertEqual(report.instances_compared, 500)
        self.assertEqual(report.progress_violations, 0)

    @pytest.mark.slow
    def test_homomorphism_targets(self):
        targets = ("C3", "C4", "C5", "C6", "PSTAR3", "PSTAR4")
        config = SweepConfig(
            max_vertices=0,
            lists_per_graph=30,
            targets=targets,
            hom_max_vertices=4,
            modes=tuple(SolverMode),
        )
        report = differential_sweep(config)
        self.assertTrue(report.ok, report.summary_lines())
        self.assertEqual(report.instances_compared, len(targets) * 44 * 31)
        self.assertEqual(report.runs, report.instances_compared * len(SolverMode))


if __name__ == "__main__":
    unittest.main()
