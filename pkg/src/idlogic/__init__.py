"""Finite-structure toolkit for first-order logic with inductive definitions."""
__version__ = "0.1.0"
