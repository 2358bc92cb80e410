"""
Tests for the seeded instance generators.
"""

import random
import unittest
from unittest.mock import patch

import networkx as nx

from diameter_coloring.core.graph import Graph, diameter
from diameter_coloring.core.instance import FULL_LIST
from diameter_coloring.exceptions import ArgumentError, GenerationError
from diameter_coloring.modules.generator import (
    NONEMPTY_LISTS,
    SMALL_LISTS,
    GenFamily,
    GenSpec,
    ListMode,
    add_universal_vertex,
    default_edge_prob,
    generate,
    random_lists,
)
from diameter_coloring.modules.instance_io import serialize


class TestFamilies(unittest.TestCase):
    def test_universal_apex(self):
        for seed in range(3):
            with self.subTest(seed=seed):
                inst = generate(GenSpec(GenFamily.UNIVERSAL_APEX, 9, rng_seed=seed))
                self.assertEqual(inst.vertex_count, 9)
                self.assertLessEqual(diameter(inst.graph), 2)
                self.assertEqual(inst.graph.degree(8), 8)

    def test_add_universal_vertex(self):
        path = Graph.from_networkx(nx.path_graph(4))
        apexed = add_universal_vertex(path)
        self.assertEqual(apexed.vertex_count, 5)
        self.assertEqual(apexed.edge_count, 7)
        self.assertEqual(diameter(apexed), 2)

    def test_cycle(self):
        inst = generate(GenSpec(GenFamily.CYCLE, 7))
        self.assertEqual(inst.graph.edge_count, 7)
        self.assertEqual(diameter(inst.graph), 3)

    def test_petersen(self):
        inst = generate(GenSpec(GenFamily.PETERSEN, 10))
        self.assertEqual(inst.graph.edge_count, 15)
        self.assertEqual(diameter(inst.graph), 2)

    def test_random_diameter_two(self):
        inst = generate(GenSpec(GenFamily.RANDOM_DIAM2, 50, rng_seed=1))
        self.assertEqual(inst.vertex_count, 50)
        self.assertEqual(diameter(inst.graph), 2)

    def test_random_diameter_three(self):
        inst = generate(GenSpec(GenFamily.RANDOM_DIAM3, 20, rng_seed=1))
        self.assertEqual(diameter(inst.graph), 3)

    def test_custom_edge_prob(self):
        dense = generate(GenSpec(GenFamily.CUSTOM_EDGE_PROB, 6, edge_prob=1.0))
        self.assertEqual(dense.graph.edge_count, 15)
        empty = generate(GenSpec(GenFamily.CUSTOM_EDGE_PROB, 6, edge_prob=0.0))
        self.assertEqual(empty.graph.edge_count, 0)

    def test_rejection_sampling_gives_up(self):
        spec = GenSpec(GenFamily.RANDOM_DIAM2, 6, edge_prob=0.0)
        with patch("diameter_coloring.modules.generator.MAX_REJECTIONS", 5):
            with self.assertRaises(GenerationError):
                generate(spec)


class TestDeterminism(unittest.TestCase):
    def test_same_spec_same_instance(self):
        for family, n in ((GenFamily.RANDOM_DIAM2, 12), (GenFamily.UNIVERSAL_APEX, 10)):
            spec = GenSpec(family, n, rng_seed=3, list_mode=ListMode.RANDOM_NONEMPTY)
            with self.subTest(family=family):
                self.assertEqual(serialize(generate(spec)), serialize(generate(spec)))

    def test_seed_changes_the_instance(self):
        first = generate(GenSpec(GenFamily.RANDOM_DIAM2, 12, rng_seed=0))
        second = generate(GenSpec(GenFamily.RANDOM_DIAM2, 12, rng_seed=1))
        self.assertNotEqual(serialize(first), serialize(second))


class TestLists(unittest.TestCase):
    def test_list_tables(self):
        self.assertEqual(len(NONEMPTY_LISTS), 7)
        self.assertEqual(len(SMALL_LISTS), 6)
        self.assertNotIn(FULL_LIST, SMALL_LISTS)

    def test_modes(self):
        rng = random.Random(0)
        self.assertEqual(random_lists(4, ListMode.FULL, rng), [FULL_LIST] * 4)
        self.assertTrue(set(random_lists(50, ListMode.RANDOM_NONEMPTY, rng)) <= set(NONEMPTY_LISTS))
        self.assertTrue(set(random_lists(50, ListMode.RANDOM_SIZE_LE2, rng)) <= set(SMALL_LISTS))

    def test_generated_lists(self):
        inst = generate(GenSpec(GenFamily.CYCLE, 9, list_mode="random-size-le2"))
        self.assertTrue(all(inst.list_size(v) <= 2 for v in range(9)))


class TestGenSpec(unittest.TestCase):
    def test_strings_are_parsed(self):
        spec = GenSpec("Random_Diam2", 5, list_mode="full")
        self.assertEqual(spec.family, GenFamily.RANDOM_DIAM2)
        self.assertEqual(spec.list_mode, ListMode.FULL)

    def test_validation(self):
        for kwargs in (
            {"family": GenFamily.CYCLE, "n": 0},
            {"family": GenFamily.CYCLE, "n": 2},
            {"family": GenFamily.CYCLE, "n": 5, "edge_prob": 1.5},
            {"family": GenFamily.PETERSEN, "n": 9},
            {"family": GenFamily.RANDOM_DIAM2, "n": 2},
            {"family": GenFamily.RANDOM_DIAM3, "n": 3},
            {"family": GenFamily.CUSTOM_EDGE_PROB, "n": 5},
            {"family": "tree", "n": 5},
            {"family": GenFamily.CYCLE, "n": 5, "list_mode": "sparse"},
        ):
            with self.subTest(kwargs=kwargs):
                with self.assertRaises(ArgumentError):
                    GenSpec(**kwargs)

    def test_default_edge_prob(self):
        self.assertEqual(default_edge_prob(GenFamily.CUSTOM_EDGE_PROB, 10), 0.5)
        self.assertEqual(default_edge_prob(GenFamily.RANDOM_DIAM2, 1), 0.5)
        self.assertLess(default_edge_prob(GenFamily.RANDOM_DIAM2, 1000), 0.2)
        self.assertLess(default_edge_prob(GenFamily.RANDOM_DIAM3, 100), default_edge_prob(GenFamily.RANDOM_DIAM2, 100))


if __name__ == "__main__":
    unittest.main()
