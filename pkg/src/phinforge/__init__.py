"""Exact finite models for filtered (phi, N)-modules of p-adic period domains."""

__version__ = "0.1.0"
