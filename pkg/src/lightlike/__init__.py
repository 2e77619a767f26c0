"""Exact pointwise geometry of degenerate metrics."""

__version__ = "0.1.0"
