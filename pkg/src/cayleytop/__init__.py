"""Marked groups, Cayley graphs and coarse-geometry diagnostics at desk scale."""
__version__ = "0.1.0"
