"""
Tests for search statistics and outcomes.
"""

import unittest

from diameter_coloring.core.outcome import RULES, SearchOutcome, SearchStats, Verdict


class TestSearchStats(unittest.TestCase):
    def test_every_rule_starts_at_zero(self):
        stats = SearchStats()
        for rule in RULES:
            self.assertEqual(stats.firings(rule), 0)

    def test_fire_and_merge(self):
        left = SearchStats(nodes_expanded=3, max_depth=2, fallbacks=1)
        left.fire("B1")
        right = SearchStats(nodes_expanded=4, max_depth=5, witness_tuples_checked=7)
        right.fire("B1", 2)
        right.fire("R3")
        right.rule_trace.append("R3")
        left.merge(right)
        self.assertEqual(left.nodes_expanded, 7)
        self.assertEqual(left.max_depth, 5)
        self.assertEqual(left.firings("B1"), 3)
        self.assertEqual(left.firings("R3"), 1)
        self.assertEqual(left.witness_tuples_checked, 7)
        self.assertEqual(left.fallbacks, 1)
        self.assertEqual(left.rule_trace, ["R3"])

    def test_as_dict_keys(self):
        stats = SearchStats(wall_time=0.1234567)
        values = stats.as_dict()
        self.assertEqual(values["wall_time"], 0.123457)
        self.assertIn("nodes_expanded", values)
        self.assertIn("rule_B4", values)
        self.assertNotIn("wall_time", stats.counters())


class TestSearchOutcome(unittest.TestCase):
    def test_is_sat(self):
        self.assertTrue(SearchOutcome(Verdict.SAT, (1,), SearchStats()).is_sat)
        self.assertFalse(SearchOutcome(Verdict.TIMEOUT, None, SearchStats()).is_sat)

    def test_verdict_values(self):
        self.assertEqual(Verdict("UNSAT"), Verdict.UNSAT)
        self.assertEqual(Verdict.SAT.value, "SAT")


if __name__ == "__main__":
    unittest.main()
