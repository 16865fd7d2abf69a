"""Harmonic square tilings of planar weighted networks."""

from _harmtile import __version__, decompose, fixture, index, solve, tile

__all__ = ["__version__", "decompose", "fixture", "index", "solve", "tile"]
