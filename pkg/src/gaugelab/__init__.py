"""Numerical laboratory for gauge transformations on lattice quantum Hamiltonians."""

__version__ = "0.1.0"
