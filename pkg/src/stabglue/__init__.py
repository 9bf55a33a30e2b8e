"""Exact glued stability computations."""
