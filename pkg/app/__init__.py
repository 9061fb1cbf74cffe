"""Torus surgery calculus on presentations of 4-manifold fundamental groups."""

__version__ = "0.1.0"
