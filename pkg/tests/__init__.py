"""
Tests for diameter-coloring.
"""
