"""Homomorphisms of random cubic graphs into short odd cycles."""

__version__ = "0.1.0"
