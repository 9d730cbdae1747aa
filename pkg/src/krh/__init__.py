"""Exact-arithmetic engine for matrix-factorization link cohomology."""

__version__ = "0.1.0"
