"""
Tests for the 2-SAT solver and the encoding of two-color list problems.
"""

import unittest
from itertools import combinations, combinations_with_replacement, product

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diameter_coloring.core.graph import Graph
from diameter_coloring.core.instance import ColoringInstance, ListAssignment, finish_two_lists
from diameter_coloring.core.twosat import TwoCnf, edwards_encode, encode_lists, negate, solve_2sat
from diameter_coloring.exceptions import ArgumentError, ContractViolation
from diameter_coloring.modules.generator import SMALL_LISTS
from diameter_coloring.modules.homomorphism import HomInstance, TargetGraph
from diameter_coloring.modules.oracle import brute_color

LITERALS = [(v, polarity) for v in range(3) for polarity in (True, False)]
CLAUSES = list(combinations_with_replacement(LITERALS, 2))


def formula_of(clauses, variable_count=3) -> TwoCnf:
    formula = TwoCnf(variable_count=variable_count)
    for first, second in clauses:
        formula.add_clause(first, second)
    return formula


def truth_table_sat(formula: TwoCnf) -> bool:
    return any(
        formula.evaluate(assignment)
        for assignment in product((False, True), repeat=formula.variable_count)
    )


def all_graphs(n):
    pairs = list(combinations(range(n), 2))
    for subset in range(1 << len(pairs)):
        yield Graph.from_edges(n, [pair for i, pair in enumerate(pairs) if subset >> i & 1])


class TestTwoCnf(unittest.TestCase):
    def test_new_variable_and_unit_clause(self):
        formula = TwoCnf()
        x = formula.new_variable()
        formula.add_clause((x, True))
        self.assertEqual(formula.variable_count, 1)
        self.assertEqual(formula.clauses, [((0, True), (0, True))])

    def test_negate(self):
        self.assertEqual(negate((4, True)), (4, False))

    def test_validate_rejects_unknown_variable(self):
        formula = TwoCnf(variable_count=1)
        formula.add_clause((3, True))
        with self.assertRaises(ArgumentError):
            formula.validate()

    def test_validate_rejects_malformed_literal(self):
        formula = TwoCnf(variable_count=1, clauses=[(("x", True), (0, False))])  # type: ignore[list-item]
        with self.assertRaises(ArgumentError):
            solve_2sat(formula)

    def test_to_dimacs(self):
        formula = TwoCnf(variable_count=2)
        formula.add_clause((0, True), (1, False))
        formula.add_clause((1, True))
        self.assertEqual(
            formula.to_dimacs(comment="example"),
            "c example\np cnf 2 2\n1 -2 0\n2 0\n",
        )


class TestSolve2Sat(unittest.TestCase):
    def test_implied_variable(self):
        x, y = 0, 1
        formula = formula_of([((x, True), (y, True)), ((x, False), (y, True))], variable_count=2)
        assignment = solve_2sat(formula)
        self.assertIsNotNone(assignment)
        self.assertTrue(assignment[y])
        self.assertTrue(formula.evaluate(assignment))

    def test_contradicting_units(self):
        formula = formula_of([((0, True), (0, True)), ((0, False), (0, False))], variable_count=1)
        self.assertIsNone(solve_2sat(formula))

    def test_empty_formula(self):
        self.assertEqual(solve_2sat(TwoCnf()), [])
        self.assertEqual(len(solve_2sat(TwoCnf(variable_count=3))), 3)

    @settings(max_examples=300, deadline=None)
    @given(st.lists(st.sampled_from(CLAUSES), max_size=6))
    def test_matches_truth_table(self, clauses):
        formula = formula_of(clauses)
        assignment = solve_2sat(formula)
        self.assertEqual(assignment is not None, truth_table_sat(formula))
        if assignment is not None:
            self.assertTrue(formula.evaluate(assignment))

    @pytest.mark.slow
    def test_matches_truth_table_exhaustively(self):
        for size in range(7):
            for clauses in combinations(CLAUSES, size):
                formula = formula_of(clauses)
                assignment = solve_2sat(formula)
                self.assertEqual(assignment is not None, truth_table_sat(formula), clauses)
                if assignment is not None:
                    self.assertTrue(formula.evaluate(assignment))


class TestListEncoding(unittest.TestCase):
    def test_triangle_with_two_colors_is_unsat(self):
        inst = ColoringInstance(Graph.from_networkx(nx.complete_graph(3)), [[1, 2]] * 3)
        formula, _ = edwards_encode(inst)
        self.assertIsNone(solve_2sat(formula))

    def test_path_with_fixed_end(self):
        inst = ColoringInstance(Graph.from_networkx(nx.path_graph(3)), [[1], [1, 2], [1, 2]])
        formula, decoding = edwards_encode(inst)
        assignment = solve_2sat(formula)
        self.assertIsNotNone(assignment)
        coloring = decoding.decode(assignment)
        self.assertEqual(coloring, (1, 2, 1))

    def test_disjoint_edges(self):
        inst = ColoringInstance(Graph.from_edges(4, [(0, 1), (2, 3)]), [[1, 2]] * 4)
        formula, decoding = edwards_encode(inst)
        self.assertEqual(formula.variable_count, 4)
        coloring = decoding.decode(solve_2sat(formula))
        self.assertNotEqual(coloring[0], coloring[1])
        self.assertNotEqual(coloring[2], coloring[3])

    def test_conflicting_singletons_are_unsat(self):
        inst = ColoringInstance(Graph.from_edges(2, [(0, 1)]), [[2], [2]])
        formula, _ = encode_lists(inst)
        self.assertIsNone(solve_2sat(formula))

    def test_three_list_is_a_contract_violation(self):
        with self.assertRaises(ContractViolation):
            edwards_encode(ColoringInstance(Graph(1, [0])))

    def test_edwards_needs_a_coloring_instance(self):
        inst = HomInstance(Graph(1, [0]), TargetGraph.cycle(5), [[0, 1]])
        with self.assertRaises(ArgumentError):
            edwards_encode(inst)

    def test_target_edges_drive_the_clauses(self):
        # Into C5, vertex 0 may only sit next to 1 and 4.
        target = TargetGraph.cycle(5)
        inst = HomInstance(Graph.from_edges(2, [(0, 1)]), target, [[0], [1, 2]])
        formula, decoding = encode_lists(inst)
        self.assertEqual(decoding.decode(solve_2sat(formula)), (0, 1))

    def _check_against_oracle(self, graph, masks):
        inst = ColoringInstance(graph, ListAssignment(masks))
        expected = brute_color(inst, count_all=False).is_sat
        coloring = finish_two_lists(inst)
        self.assertEqual(coloring is not None, expected, inst)

    def test_matches_oracle_on_three_vertices(self):
        for n in range(1, 4):
            for graph in all_graphs(n):
                for masks in product(SMALL_LISTS, repeat=n):
                    self._check_against_oracle(graph, masks)

    @pytest.mark.slow
    def test_matches_oracle_on_four_vertices(self):
        for graph in all_graphs(4):
            for masks in product(SMALL_LISTS, repeat=4):
                self._check_against_oracle(graph, masks)


if __name__ == "__main__":
    unittest.main()
