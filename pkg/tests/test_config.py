"""
Tests for solver configuration and environment loading.
"""

import os
import tempfile
import unittest
from unittest.mock import patch

from diameter_coloring.config import SolverConfig, SolverMode, log_level_from_env
from diameter_coloring.exceptions import ArgumentError


class TestSolverMode(unittest.TestCase):
    def test_parse_accepts_variants(self):
        self.assertEqual(SolverMode.parse("PAPER"), SolverMode.PAPER)
        self.assertEqual(SolverMode.parse("baseline_ms"), SolverMode.BASELINE_MS)
        self.assertEqual(SolverMode.parse(" diam3 "), SolverMode.DIAM3)

    def test_parse_rejects_unknown(self):
        with self.assertRaises(ArgumentError):
            SolverMode.parse("fast")


class TestSolverConfig(unittest.TestCase):
    def test_defaults(self):
        config = SolverConfig()
        self.assertEqual(config.mode, SolverMode.COMPLETE)
        self.assertEqual(config.k_const, 1.0)
        self.assertEqual(config.witness_budget, 2000)
        self.assertEqual(config.rng_seed, 0)
        self.assertEqual(config.max_retries, 32)
        self.assertIsNone(config.time_limit)
        self.assertEqual(config.threads, 1)

    def test_mode_given_as_string(self):
        self.assertEqual(SolverConfig(mode="randomized").mode, SolverMode.RANDOMIZED)

    def test_validation(self):
        for kwargs in (
            {"k_const": 0},
            {"witness_budget": -1},
            {"max_retries": -1},
            {"time_limit": 0},
            {"threads": 0},
            {"phi_cap": 0},
            {"rng_seed": -1},
            {"rng_seed": 2**64},
        ):
            with self.subTest(kwargs=kwargs):
                with self.assertRaises(ArgumentError):
                    SolverConfig(**kwargs)

    def test_with_overrides_skips_none(self):
        config = SolverConfig(rng_seed=5).with_overrides(rng_seed=None, threads=4)
        self.assertEqual(config.rng_seed, 5)
        self.assertEqual(config.threads, 4)


class TestFromEnv(unittest.TestCase):
    @patch.dict(
        os.environ,
        {"DIAMCOL_MODE": "paper", "DIAMCOL_K": "2.5", "DIAMCOL_SEED": "9", "DIAMCOL_THREADS": ""},
        clear=True,
    )
    def test_reads_prefixed_variables(self):
        config = SolverConfig.from_env()
        self.assertEqual(config.mode, SolverMode.PAPER)
        self.assertEqual(config.k_const, 2.5)
        self.assertEqual(config.rng_seed, 9)
        self.assertEqual(config.threads, 1)

    @patch.dict(os.environ, {"DIAMCOL_BUDGET": "lots"}, clear=True)
    def test_invalid_value(self):
        with self.assertRaises(ArgumentError):
            SolverConfig.from_env()

    @patch.dict(os.environ, {}, clear=True)
    def test_dotenv_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, ".env")
            with open(path, "w", encoding="utf-8") as handle:
                handle.write("DIAMCOL_RETRIES=3\nDIAMCOL_TIME_LIMIT=1.5\n")
            config = SolverConfig.from_env(path)
        self.assertEqual(config.max_retries, 3)
        self.assertEqual(config.time_limit, 1.5)

    @patch.dict(os.environ, {"DIAMCOL_LOG_LEVEL": "debug"}, clear=True)
    def test_log_level(self):
        self.assertEqual(log_level_from_env(), "DEBUG")


if __name__ == "__main__":
    unittest.main()
