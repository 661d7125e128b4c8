"""Exact and approximate zero-sum equilibria from Hedge-vs-best-response dynamics."""

__version__ = "0.1.0"
