"""Exact cluster-algebra and Verlinde-ring computations."""

__version__ = "0.1.0"
