"""Numerical laboratory for weighted Strichartz estimates and the energy-critical inhomogeneous NLS."""
__version__ = "0.1.0"
