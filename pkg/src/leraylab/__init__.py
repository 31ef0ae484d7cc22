"""Numerical laboratory for weighted-L2 Navier-Stokes estimates."""
__version__ = "0.1.0"
