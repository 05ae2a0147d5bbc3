"""Decide whether an ODE can be linearized by a point transformation."""

__version__ = "0.1.0"
