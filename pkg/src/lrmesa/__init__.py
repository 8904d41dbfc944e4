"""Measure-theoretic Littlewood-Richardson rule and Sigma-witnessed Schubert reductions."""

__version__ = "0.1.0"
