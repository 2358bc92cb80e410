"""
Core test modules for diameter-coloring.
"""
