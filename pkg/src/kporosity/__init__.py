"""Numerical k-porosity, box-counting dimension and covering constructions for grid sets."""

__version__ = "0.1.0"
