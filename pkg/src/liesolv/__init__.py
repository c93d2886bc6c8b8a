"""Exact solvability analysis for restricted enveloping algebras in characteristic 2."""

__version__ = "0.1.0"
