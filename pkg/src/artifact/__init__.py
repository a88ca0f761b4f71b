"""Deciding whether a graph embeds into a 2-dimensional simplicial complex."""

__version__ = "0.1.0"
