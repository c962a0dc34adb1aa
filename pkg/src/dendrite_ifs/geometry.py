"""Exact planar kernel for the four-map system ``{S_0, S_1, S_2, S_h}``.

    S_j(x, y) = ((x + j) / 3, y / 3),   j = 0, 1, 2
    S_h(x, y) = (-h*y + c, h*x)

Every map has a rational linear part and ``c`` enters only through a
translation, so every point reached from rational points is affine in ``c``.
Coordinates are stored exactly as :class:`CLinear` values ``a + b*c``; any
predicate is then the sign of a polynomial of degree <= 2 in ``c``, decided
by :class:`~dendrite_ifs.ternary.CConstant`.  Identically-zero predicates
(shared vertices, points on edges) come out as an exact 0, which interval
coordinates could never certify.

Words are strings over ``"012h"``; ``compose("ab")`` is ``S_a o S_b``, the
leftmost letter acting last.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

from .interval import Number, RationalInterval
from .ternary import CConstant, PrecisionExhausted, truncation_value

ALPHABET = "012h"
I_LETTERS = "012"


class NotInvariant(ValueError):
    """Some generator maps the base triangle D outside itself."""


class Relation(enum.Enum):
    DISJOINT = "disjoint"
    INTERSECTING = "intersecting"
    UNKNOWN = "unknown"


@dataclass(frozen=True, slots=True)
class CLinear:
    """The real number ``a + b*c``."""

    a: Fraction
    b: Fraction = Fraction(0)

    @staticmethod
    def of(v: Union["CLinear", Number]) -> "CLinear":
        if isinstance(v, CLinear):
            return v
        return CLinear(Fraction(v), Fraction(0))

    def __add__(self, o: "CLinear") -> "CLinear":
        return CLinear(self.a + o.a, self.b + o.b)

    def __sub__(self, o: "CLinear") -> "CLinear":
        return CLinear(self.a - o.a, self.b - o.b)

    def __neg__(self) -> "CLinear":
        return CLinear(-self.a, -self.b)

    def scale(self, k: Fraction) -> "CLinear":
        return CLinear(self.a * k, self.b * k)

    def times(self, o: "CLinear") -> tuple:
        """Product as polynomial coefficients ``(a0, a1, a2)`` in ``c``."""
        return (self.a * o.a, self.a * o.b + self.b * o.a, self.b * o.b)

    @property
    def poly(self) -> tuple:
        return (self.a, self.b)

    def enclose(self, c_iv: RationalInterval) -> RationalInterval:
        u = self.a + self.b * c_iv.lo
        v = self.a + self.b * c_iv.hi
        return RationalInterval(u, v) if u <= v else RationalInterval(v, u)

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*c"


ZERO = CLinear(Fraction(0))
C = CLinear(Fraction(0), Fraction(1))


@dataclass(frozen=True, slots=True)
class Point2:
    x: CLinear
    y: CLinear

    @staticmethod
    def of(x, y) -> "Point2":
        return Point2(CLinear.of(x), CLinear.of(y))

    def __sub__(self, o: "Point2") -> "Point2":
        return Point2(self.x - o.x, self.y - o.y)

    def __add__(self, o: "Point2") -> "Point2":
        return Point2(self.x + o.x, self.y + o.y)

    def enclose(self, c: CConstant, p: Optional[int] = None) -> "IntervalPoint":
        iv = c.interval(p)
        return IntervalPoint(self.x.enclose(iv), self.y.enclose(iv))


@dataclass(frozen=True)
class IntervalPoint:
    """A point known only up to an axis-aligned rational box."""

    x: RationalInterval
    y: RationalInterval

    def contains(self, other: "IntervalPoint") -> bool:
        return self.x.contains(other.x) and self.y.contains(other.y)

    @property
    def width(self) -> Fraction:
        return max(self.x.width, self.y.width)


C_POINT = Point2(C, ZERO)  # the point (c, 0)


def _dot(u: Point2, v: Point2) -> tuple:
    p = u.x.times(v.x)
    q = u.y.times(v.y)
    return (p[0] + q[0], p[1] + q[1], p[2] + q[2])


def _cross(u: Point2, v: Point2) -> tuple:
    p = u.x.times(v.y)
    q = u.y.times(v.x)
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2])


def _perp(u: Point2) -> Point2:
    return Point2(-u.y, u.x)


@dataclass(frozen=True)
class Similarity:
    """``x -> linear @ x + translation`` with ``linear = ratio * (orthogonal matrix)``."""

    linear: tuple  # ((m00, m01), (m10, m11)), rational
    translation: Point2
    ratio: Fraction

    @staticmethod
    def identity() -> "Similarity":
        one, zero = Fraction(1), Fraction(0)
        return Similarity(((one, zero), (zero, one)), Point2(ZERO, ZERO), one)

    def apply(self, p) -> Point2:
        if not isinstance(p, Point2):
            p = Point2.of(*p)
        (m00, m01), (m10, m11) = self.linear
        t = self.translation
        return Point2(
            CLinear(m00 * p.x.a + m01 * p.y.a + t.x.a, m00 * p.x.b + m01 * p.y.b + t.x.b),
            CLinear(m10 * p.x.a + m11 * p.y.a + t.y.a, m10 * p.x.b + m11 * p.y.b + t.y.b),
        )

    def __matmul__(self, other: "Similarity") -> "Similarity":
        """Composition ``self o other`` (``other`` acts first)."""
        (a00, a01), (a10, a11) = self.linear
        (b00, b01), (b10, b11) = other.linear
        linear = (
            (a00 * b00 + a01 * b10, a00 * b01 + a01 * b11),
            (a10 * b00 + a11 * b10, a10 * b01 + a11 * b11),
        )
        return Similarity(linear, self.apply(other.translation), self.ratio * other.ratio)

    def apply_triangle(self, t: "Triangle") -> "Triangle":
        return Triangle(self.apply(t.v0), self.apply(t.v1), self.apply(t.v2))

    def is_contracting_similarity(self) -> bool:
        """Columns orthogonal with equal norm ``ratio``, and ``ratio < 1``."""
        (m00, m01), (m10, m11) = self.linear
        r2 = self.ratio * self.ratio
        return (
            m00 * m01 + m10 * m11 == 0
            and m00 * m00 + m10 * m10 == r2
            and m01 * m01 + m11 * m11 == r2
            and 0 < self.ratio < 1
        )


def _check_h(h) -> Fraction:
    h = Fraction(h)
    if not 0 < h < 1:
        raise ValueError(f"h must satisfy 0 < h < 1, got {h}")
    return h


@lru_cache(maxsize=64)
def _generators(h: Fraction) -> dict:
    third = Fraction(1, 3)
    zero = Fraction(0)
    gens = {
        str(j): Similarity(((third, zero), (zero, third)), Point2.of(Fraction(j, 3), 0), third)
        for j in range(3)
    }
    gens["h"] = Similarity(((zero, -h), (h, zero)), Point2(C, ZERO), h)
    return gens


def generator(letter: str, h) -> Similarity:
    letter = str(letter)
    if letter not in ALPHABET:
        raise ValueError(f"unknown letter {letter!r}; alphabet is {ALPHABET}")
    return _generators(_check_h(h))[letter]


def check_word(word: str, alphabet: str = ALPHABET) -> str:
    word = "".join(str(ch) for ch in word)
    bad = set(word) - set(alphabet)
    if bad:
        raise ValueError(f"word {word!r} has letters outside {alphabet!r}")
    return word


@lru_cache(maxsize=1 << 17)
def _compose(word: str, h: Fraction) -> Similarity:
    if not word:
        return Similarity.identity()
    if len(word) == 1:
        return _generators(h)[word]
    return _compose(word[:-1], h) @ _generators(h)[word[-1]]


def compose(word: str, h) -> Similarity:
    """``S_{w1} o S_{w2} o ... o S_{wn}``."""
    return _compose(check_word(word), _check_h(h))


def c_image(word: str, c: CConstant, p: Optional[int] = None) -> RationalInterval:
    """Enclosure of ``c_w = S_w(c) = 3^-n c + 0.w1...wn`` computed from digits alone."""
    word = check_word(word, I_LETTERS)
    if not word:
        raise ValueError("c_image needs a nonempty I-word")
    scale = Fraction(1, 3 ** len(word))
    return c.interval(p) * scale + truncation_value(word)


def c_image_linear(word: str) -> CLinear:
    """``c_w`` as an exact affine function of ``c``."""
    word = check_word(word, I_LETTERS)
    return CLinear(truncation_value(word) if word else Fraction(0), Fraction(1, 3 ** len(word)))


@dataclass(frozen=True)
class Triangle:
    v0: Point2
    v1: Point2
    v2: Point2
    _boxes: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def vertices(self) -> tuple:
        return (self.v0, self.v1, self.v2)

    def box(self, c: CConstant, p: Optional[int] = None) -> tuple:
        """Outer axis-aligned box ``(xlo, xhi, ylo, yhi)`` at precision ``p``."""
        p = c.precision_start if p is None else p
        key = (id(c.stream), p)
        cached = self._boxes.get(key)
        if cached is None:
            iv = c.interval(p)
            xs = [v.x.enclose(iv) for v in self.vertices]
            ys = [v.y.enclose(iv) for v in self.vertices]
            cached = (
                min(i.lo for i in xs),
                max(i.hi for i in xs),
                min(i.lo for i in ys),
                max(i.hi for i in ys),
            )
            self._boxes[key] = cached
        return cached

    def signed_area2(self) -> tuple:
        """Twice the signed area, as a polynomial in ``c``."""
        return _cross(self.v1 - self.v0, self.v2 - self.v0)

    def orientation(self, c: CConstant) -> int:
        return c.sign(self.signed_area2())

    def diameter_squared(self) -> list:
        """Squared side lengths as polynomials in ``c``; the diameter is the largest."""
        return [_dot(b - a, b - a) for a, b in self._edges()]

    def _edges(self):
        v = self.vertices
        return ((v[0], v[1]), (v[1], v[2]), (v[2], v[0]))


def point_in_triangle(t: Triangle, p: Point2, c: CConstant) -> bool:
    """Closed containment; raises :class:`PrecisionExhausted` if undecidable."""
    orient = t.orientation(c)
    signs = [c.sign(_cross(b - a, p - a)) for a, b in t._edges()]
    if orient == 0:
        # degenerate triangle: p must lie on one of its segments
        return any(s == 0 and _on_segment(a, b, p, c) for s, (a, b) in zip(signs, t._edges()))
    return all(s * orient >= 0 for s in signs)


def _on_segment(a: Point2, b: Point2, p: Point2, c: CConstant) -> bool:
    d = b - a
    return c.sign(_dot(p - a, d)) >= 0 and c.sign(_dot(p - b, d)) <= 0


def triangle_contains(outer: Triangle, inner: Triangle, c: CConstant) -> bool:
    return all(point_in_triangle(outer, v, c) for v in inner.vertices)


def _axes(t: Triangle, c: CConstant) -> list:
    axes = []
    degenerate = t.orientation(c) == 0
    for a, b in t._edges():
        d = b - a
        if d.x.a == d.x.b == d.y.a == d.y.b == 0:
            continue
        axes.append(_perp(d))
        if degenerate:
            axes.append(d)
    return axes


def _separated(t1: Triangle, t2: Triangle, axis: Point2, c: CConstant, strict: bool) -> bool:
    """Whether projections onto ``axis`` are separated (strictly, or touching allowed)."""
    pos = neg = zero = False
    for u in t1.vertices:
        for v in t2.vertices:
            s = c.sign(_dot(axis, v - u))
            if s > 0:
                pos = True
            elif s < 0:
                neg = True
            else:
                zero = True
                if strict:
                    return False
            if pos and neg:
                return False
    return not (pos and neg) and (pos or neg or not zero)


def _boxes_apart(t1: Triangle, t2: Triangle, c: CConstant, strict: bool) -> bool:
    a = t1.box(c)
    b = t2.box(c)
    if strict:
        return a[1] < b[0] or b[1] < a[0] or a[3] < b[2] or b[3] < a[2]
    return a[1] <= b[0] or b[1] <= a[0] or a[3] <= b[2] or b[3] <= a[2]


def _relation(t1: Triangle, t2: Triangle, c: CConstant, strict: bool) -> Relation:
    if _boxes_apart(t1, t2, c, strict):
        return Relation.DISJOINT
    try:
        for axis in _axes(t1, c) + _axes(t2, c):
            if _separated(t1, t2, axis, c, strict):
                return Relation.DISJOINT
    except PrecisionExhausted:
        return Relation.UNKNOWN
    return Relation.INTERSECTING


def triangles_relation(t1: Triangle, t2: Triangle, c: CConstant) -> Relation:
    """Relation of two closed triangles.

    Separating-axis test over all edge normals (plus edge directions for
    degenerate triangles), which is complete for convex polygons: with exact
    signs, the absence of a strictly separating axis certifies a common point.
    """
    return _relation(t1, t2, c, strict=True)


def interiors_disjoint(t1: Triangle, t2: Triangle, c: CConstant) -> Relation:
    """``DISJOINT`` when the open triangles do not meet (touching boundaries allowed)."""
    try:
        if t1.orientation(c) == 0 or t2.orientation(c) == 0:
            return Relation.DISJOINT  # empty interior
    except PrecisionExhausted:
        return Relation.UNKNOWN
    return _relation(t1, t2, c, strict=False)


def _extreme(points, axis: Point2, c: CConstant, toward: int) -> list:
    """Points of ``points`` whose projection on ``axis`` is extreme in direction ``toward``."""
    out = []
    for p in points:
        if all(c.sign(_dot(axis, p - q)) * toward >= 0 for q in points):
            out.append(p)
    return out


def single_contact_point(t1: Triangle, t2: Triangle, c: CConstant) -> Optional[Point2]:
    """The unique common point of two triangles that touch along a separating line.

    Both triangles lie on opposite closed sides of a weakly separating line
    ``L`` through an edge normal, so ``t1 & t2 = (t1 & L) & (t2 & L)``.  When
    one of them meets ``L`` in a single vertex ``q`` lying in the other
    triangle, the intersection is exactly ``{q}``.  Returns ``None`` when no
    such certificate is found.
    """
    for axis in _axes(t1, c) + _axes(t2, c):
        signs = {c.sign(_dot(axis, v - u)) for u in t1.vertices for v in t2.vertices}
        if 1 in signs and -1 in signs:
            continue
        if 0 not in signs:
            return None  # strictly separated
        toward = 1 if 1 in signs else -1
        e1 = set(_extreme(t1.vertices, axis, c, toward))
        e2 = set(_extreme(t2.vertices, axis, c, -toward))
        if len(e2) == 1:
            (q,) = e2
            if point_in_triangle(t1, q, c):
                return q
        if len(e1) == 1:
            (q,) = e1
            if point_in_triangle(t2, q, c):
                return q
    return None


def base_triangle(h, c: Optional[CConstant] = None) -> Triangle:
    """``D`` with vertices ``(0,0), (1,0), (c,h)``, checked to contain every ``S_a(D)``."""
    h = _check_h(h)
    d = _base_triangle(h)
    if c is not None:
        if d.orientation(c) == 0:
            raise NotInvariant("base triangle is degenerate")
        for letter in ALPHABET:
            if not triangle_contains(d, generator(letter, h).apply_triangle(d), c):
                raise NotInvariant(f"S_{letter}(D) is not contained in D at h={h}")
    return d


@lru_cache(maxsize=64)
def _base_triangle(h: Fraction) -> Triangle:
    return Triangle(Point2.of(0, 0), Point2.of(1, 0), Point2(C, CLinear.of(h)))


def cell_triangle(word: str, h) -> Triangle:
    """Hull ``S_w(D)``."""
    h = _check_h(h)
    return _cell_triangle(check_word(word), h)


@lru_cache(maxsize=1 << 17)
def _cell_triangle(word: str, h: Fraction) -> Triangle:
    return _compose(word, h).apply_triangle(_base_triangle(h))


def delta_triangle(word: str, h) -> Triangle:
    """``Delta_w = S_w(S_h(D))`` for an I-word ``w`` (``Delta`` itself when empty)."""
    return cell_triangle(check_word(word, I_LETTERS) + "h", h)


def words(length: int, alphabet: str = I_LETTERS) -> list:
    """All words of exactly ``length`` letters, lexicographic in ``alphabet`` order."""
    out = [""]
    for _ in range(length):
        out = [w + a for w in out for a in alphabet]
    return out


def words_up_to(max_len: int, alphabet: str = I_LETTERS, include_empty: bool = False) -> list:
    out = [""] if include_empty else []
    for n in range(1, max_len + 1):
        out.extend(words(n, alphabet))
    return out


def max_polys(polys: Iterable[Sequence], c: CConstant) -> RationalInterval:
    """Enclosure of the maximum of several polynomials in ``c``."""
    ranges = [c.range_of(p) for p in polys]
    return RationalInterval(max(r.lo for r in ranges), max(r.hi for r in ranges))
