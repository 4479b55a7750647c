"""Numerical laboratory for time-symmetric stochastic phase-space dynamics."""

__version__ = "0.1.0"
