"""Exact verification toolkit for the four-map plane dendrite system."""

from .geometry import Relation, base_triangle, cell_triangle, compose, delta_triangle, generator, triangles_relation
from .ternary import CConstant, DigitStream, c_digits, c_interval

__all__ = [
    "CConstant",
    "DigitStream",
    "Relation",
    "base_triangle",
    "c_digits",
    "c_interval",
    "cell_triangle",
    "compose",
    "delta_triangle",
    "generator",
    "triangles_relation",
]
