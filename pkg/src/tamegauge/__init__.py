"""Combinatorics and computations for tame types of GL2 over an unramified p-adic field."""

__version__ = "0.1.0"
