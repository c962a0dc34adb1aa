"""SVG rendering of cell decompositions and the construction overlays.

This is the only place floats appear: vertex enclosures are reduced to their
midpoints and rounded when written.  Nothing here feeds back into a check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional
from xml.sax.saxutils import escape

from . import geometry as g
from .ternary import CConstant

OVERLAYS = ("D", "delta", "segment", "labels")


@dataclass
class SceneSpec:
    depth: int = 6
    overlays: frozenset = field(default_factory=frozenset)
    delta_depth: int = 2
    width: int = 1000
    margin: int = 20
    digits: int = 6

    def __post_init__(self):
        self.overlays = frozenset(self.overlays)
        unknown = self.overlays - set(OVERLAYS)
        if unknown:
            raise ValueError(f"unknown overlay(s): {', '.join(sorted(unknown))}")
        if self.depth < 0 or self.delta_depth < 0:
            raise ValueError("depths must be non-negative")
        if self.width <= 2 * self.margin:
            raise ValueError("width too small for margin")


class _Frame:
    """Maps the viewport ``[0, 1] x [0, h]`` (which contains D) onto pixels."""

    def __init__(self, spec: SceneSpec, h: Fraction, c_mid: float):
        self.c_mid = c_mid
        self.scale = spec.width - 2 * spec.margin
        self.margin = spec.margin
        self.height = int(round(float(h) * self.scale)) + 2 * spec.margin
        self.top = float(h)
        self.digits = spec.digits

    def xy(self, p: g.Point2) -> tuple:
        x = float(p.x.a) + float(p.x.b) * self.c_mid
        y = float(p.y.a) + float(p.y.b) * self.c_mid
        px = self.margin + x * self.scale
        py = self.margin + (self.top - y) * self.scale
        return round(px, self.digits), round(py, self.digits)

    def points(self, t: g.Triangle) -> str:
        return " ".join(f"{x:g},{y:g}" for x, y in (self.xy(v) for v in t.vertices))


def render_scene(spec: SceneSpec, h=Fraction(2, 9), c: Optional[CConstant] = None) -> str:
    """Standalone SVG: one ``<polygon class="cell">`` per depth-``n`` cell, in word order."""
    h = Fraction(h)
    c = c if c is not None else CConstant()
    frame = _Frame(spec, h, float(c.interval().midpoint))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width}" height="{frame.height}" '
        f'viewBox="0 0 {spec.width} {frame.height}">',
        f"<desc>h={h.numerator}/{h.denominator} depth={spec.depth}</desc>",
        '<g id="cells" fill="#2b5d8a" stroke="none">',
    ]
    for word in g.words(spec.depth, g.ALPHABET):
        tri = g.cell_triangle(word, h)
        out.append(f'<polygon class="cell" data-word="{word}" points="{frame.points(tri)}"/>')
    out.append("</g>")
    if spec.overlays:
        out.append('<g id="overlays" fill="none" stroke="#c0392b" stroke-width="1">')
        if "segment" in spec.overlays:
            (x0, y0), (x1, y1) = frame.xy(g.Point2.of(0, 0)), frame.xy(g.Point2.of(1, 0))
            out.append(f'<line class="overlay" data-name="segment" x1="{x0:g}" y1="{y0:g}" x2="{x1:g}" y2="{y1:g}"/>')
        if "D" in spec.overlays:
            out.append(_outline(frame, "D", g.base_triangle(h)))
        if "delta" in spec.overlays:
            out.append(_outline(frame, "delta", g.delta_triangle("", h)))
            for w in g.words_up_to(spec.delta_depth):
                out.append(_outline(frame, f"delta_{w}", g.delta_triangle(w, h)))
        out.append("</g>")
    if "labels" in spec.overlays:
        out.append('<g id="labels" font-family="serif" font-size="14" fill="#000">')
        for text, point in _labels(h):
            x, y = frame.xy(point)
            out.append(f'<text x="{x:g}" y="{y:g}">{escape(text)}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _outline(frame: _Frame, name: str, tri: g.Triangle) -> str:
    return f'<polygon class="overlay" data-name="{name}" points="{frame.points(tri)}"/>'


def _labels(h: Fraction) -> list:
    third = Fraction(1, 3)
    return [
        ("(0,0)", g.Point2.of(0, 0)),
        ("(1,0)", g.Point2.of(1, 0)),
        ("(c,h)", g.Point2(g.C, g.CLinear.of(h))),
        ("1/3", g.Point2.of(third, 0)),
        ("2/3", g.Point2.of(2 * third, 0)),
        ("D", g.Point2.of(Fraction(3, 5), h / 2)),
        ("Δ", g.Point2(g.C - g.CLinear.of(h * h), g.CLinear.of(h / 2))),
        ("D0", g.Point2.of(Fraction(1, 6), h / 9)),
        ("D1", g.Point2.of(Fraction(1, 2), h / 9)),
        ("D2", g.Point2.of(Fraction(5, 6), h / 9)),
    ]


def write_scene(spec: SceneSpec, path, h=Fraction(2, 9), c: Optional[CConstant] = None) -> int:
    """Render to ``path``; returns the number of cell polygons written."""
    svg = render_scene(spec, h, c)
    Path(path).write_text(svg)
    return 4**spec.depth
