"""Poisson cohomology of twisted quadratic Poisson structures on R^3."""

__version__ = "0.1.0"
