"""Cycle-length laboratory for random and pseudo-random graphs."""

__version__ = "0.1.0"
