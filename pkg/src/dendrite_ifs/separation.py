"""Separation checks for the system at a fixed rational ``h``.

For an I-word ``w`` of length ``n`` write ``c_w = S_w(c) = 3^-n c + 0.w``.  The
small triangles ``Delta_w = S_w(S_h(D))`` stay clear of ``Delta`` when

    h^2 < 3^n (c - c_w) c     if c_w < c
    h^2 < 3^n (c_w - c)       if c_w > c

Every comparison here is an exact sign of a polynomial in ``c``; nothing is
rounded.  A comparison still undecided at the digit cap makes the check
inconclusive instead of guessing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import geometry as g
from .geometry import C, CLinear, Relation
from .interval import RationalInterval, format_rational
from .report import VerificationReport, settle
from .ternary import CConstant, PrecisionExhausted

TAGS = ("1a", "1b", "2a", "2b", "2c", "2d")
BELOW = "below"
ABOVE = "above"


@dataclass(frozen=True)
class CaseTag:
    tag: str
    k: int
    n: int

    def __str__(self):
        return f"{self.tag}(k={self.k}, n={self.n})"


@dataclass(frozen=True)
class MarginRecord:
    word: str
    side: str
    scaled_gap: RationalInterval
    unfactored_gap: RationalInterval
    required: Fraction
    passed: bool
    case: CaseTag
    precision: int

    @property
    def margin_lo(self) -> Fraction:
        return self.scaled_gap.lo - self.required


def _constant(c: Optional[CConstant]) -> CConstant:
    return c if c is not None else CConstant()


def _diff(word: str) -> CLinear:
    """``c_w - c`` as an affine function of ``c``."""
    return g.c_image_linear(word) - C


def _side(word: str, c: CConstant) -> int:
    s = c.sign(_diff(word).poly)
    if s == 0:
        raise ArithmeticError(f"c_{word} == c exactly; c cannot be irrational")
    return s


def classify_case(word: str, c: Optional[CConstant] = None) -> CaseTag:
    c = _constant(c)
    word = g.check_word(word, g.I_LETTERS)
    if not word:
        raise ValueError("classify_case needs a nonempty I-word")
    n = len(word)
    side = _side(word, c)
    prefix = c.stream.digits(n)
    k = next((i for i in range(n) if word[i] != prefix[i]), n)
    if k < n:
        by_digits = 1 if word[k] > prefix[k] else -1
        if by_digits != side:
            raise AssertionError(f"digit order and exact order disagree for word {word!r}")
        return CaseTag("1b" if side < 0 else "2b", k, n)
    if side > 0 and word == "1":
        return CaseTag("2c", n, n)
    if side > 0 and word == "11":
        return CaseTag("2d", n, n)
    return CaseTag("1a" if side < 0 else "2a", n, n)


def _gap_polys(word: str, side: int) -> tuple:
    """``(scaled_gap, unfactored_gap)`` polynomials for the applicable inequality."""
    n = len(word)
    scale = Fraction(3**n)
    diff = _diff(word).scale(scale)
    if side < 0:
        below = -diff  # 3^n (c - c_w)
        return (Fraction(0), below.a, below.b), below.poly
    return diff.poly, diff.poly


def margin(word: str, h, c: Optional[CConstant] = None) -> MarginRecord:
    c = _constant(c)
    h = Fraction(h)
    if not 0 < h < 1:
        raise ValueError("h must satisfy 0 < h < 1")
    case = classify_case(word, c)
    side = _side(word, c)
    scaled, unfactored = _gap_polys(word, side)
    required = h * h
    s, rng, p = c.decided_range(scaled, required)
    return MarginRecord(
        word=word,
        side=BELOW if side < 0 else ABOVE,
        scaled_gap=rng,
        unfactored_gap=c.range_of(unfactored, p),
        required=required,
        passed=s > 0,
        case=case,
        precision=p,
    )


def case_bound(word: str, c: Optional[CConstant] = None) -> tuple:
    """``(case, gap_poly, bound)`` where the case analysis claims ``gap(c) > bound``.

    1a/2a: ``|c - c_w| > 3^(-n-2)``; 1b/2b: ``|c - c_w| > 3^(-k-1)`` (the lower-bound
    reading); 2c: ``3 (c_w - c) > 4/81``; 2d: ``9 (c_w - c) > 2/9``.
    """
    c = _constant(c)
    case = classify_case(word, c)
    diff = _diff(word)
    absdiff = diff if diff_sign(word, c) > 0 else -diff
    if case.tag in ("1a", "2a"):
        return case, absdiff.poly, Fraction(1, 3 ** (case.n + 2))
    if case.tag in ("1b", "2b"):
        return case, absdiff.poly, Fraction(1, 3 ** (case.k + 1))
    if case.tag == "2c":
        return case, diff.scale(Fraction(3)).poly, Fraction(4, 81)
    return case, diff.scale(Fraction(9)).poly, Fraction(2, 9)


def diff_sign(word: str, c: CConstant) -> int:
    return _side(word, c)


def case_bound_check(word: str, c: Optional[CConstant] = None) -> bool:
    c = _constant(c)
    _, poly, bound = case_bound(word, c)
    shifted = (poly[0] - bound,) + tuple(poly[1:])
    return c.sign(shifted) > 0


def _interval_record(iv: RationalInterval) -> list:
    return [format_rational(iv.lo), format_rational(iv.hi)]


def verify_separation(h, max_depth: int, c: Optional[CConstant] = None) -> VerificationReport:
    """Check both inequalities for every I-word of length ``1..max_depth``."""
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    c = _constant(c)
    h = Fraction(h)
    report = VerificationReport("separation", max_depth, details={"h": format_rational(h)})
    unknown = False
    min_margin = None
    min_word = None
    for word in g.words_up_to(max_depth):
        report.items_checked += 1
        try:
            rec = margin(word, h, c)
        except PrecisionExhausted as exc:
            unknown = True
            report.failures.append({"kind": "unknown", "word": word, "reason": str(exc)})
            continue
        if min_margin is None or rec.margin_lo < min_margin:
            min_margin, min_word = rec.margin_lo, word
        if not rec.passed:
            report.failures.append(
                {
                    "kind": "margin",
                    "word": word,
                    "case": rec.case.tag,
                    "side": rec.side,
                    "scaled_gap": _interval_record(rec.scaled_gap),
                    "unfactored_gap": _interval_record(rec.unfactored_gap),
                    "required": format_rational(rec.required),
                }
            )
    report.min_margin = min_margin
    report.details["min_margin_word"] = min_word
    report.precision_digits = c.precision_used
    return settle(report, unknown)


def _lcp(u: str, v: str) -> int:
    k = 0
    for a, b in zip(u, v):
        if a != b:
            break
        k += 1
    return k


class _Structural:
    """Structural reduction of ``Delta_i & Delta_j`` after stripping the common prefix.

    After removing the common prefix ``p`` the pair is ``S_p`` of either
    ``(Delta, Delta_s)`` when one word extends the other, or of
    ``(Delta_u, Delta_v)`` with different first letters.  In the second case
    ``Delta_u`` lies in ``S_{u1}(D)`` and ``Delta_v`` in ``S_{v1}(D)``; those
    base cells are disjoint (0/2) or meet in one point (0/1, 1/2) which must
    then avoid both small triangles.  ``S_p`` is injective, so disjointness of
    the reduced pair is disjointness of the original.
    """

    def __init__(self, h: Fraction, c: CConstant):
        self.h = h
        self.c = c
        self.delta = g.delta_triangle("", h)
        self._vs_delta = {}
        self._inside = {}
        self._avoids = {}
        self._base = {}

    def delta_vs(self, s: str) -> Relation:
        rel = self._vs_delta.get(s)
        if rel is None:
            rel = self._vs_delta[s] = g.triangles_relation(self.delta, g.delta_triangle(s, self.h), self.c)
        return rel

    def inside_first_cell(self, s: str) -> bool:
        ok = self._inside.get(s)
        if ok is None:
            ok = self._inside[s] = g.triangle_contains(
                g.cell_triangle(s[0], self.h), g.delta_triangle(s, self.h), self.c
            )
        return ok

    def base_contact(self, a: str, b: str):
        key = tuple(sorted((a, b)))
        if key not in self._base:
            t1, t2 = (g.cell_triangle(x, self.h) for x in key)
            rel = g.triangles_relation(t1, t2, self.c)
            if rel is Relation.DISJOINT:
                self._base[key] = ("disjoint", None)
            else:
                q = g.single_contact_point(t1, t2, self.c)
                self._base[key] = ("point", q) if q is not None else ("overlap", None)
        return self._base[key]

    def avoids(self, s: str, q) -> bool:
        key = (s, q)
        ok = self._avoids.get(key)
        if ok is None:
            ok = self._avoids[key] = not g.point_in_triangle(g.delta_triangle(s, self.h), q, self.c)
        return ok

    def disjoint(self, i: str, j: str) -> bool:
        k = _lcp(i, j)
        u, v = i[k:], j[k:]
        if not u or not v:
            return self.delta_vs(u or v) is Relation.DISJOINT
        if not (self.inside_first_cell(u) and self.inside_first_cell(v)):
            return False
        kind, q = self.base_contact(u[0], v[0])
        if kind == "disjoint":
            return True
        if kind == "point":
            return self.avoids(u, q) and self.avoids(v, q)
        return False


def verify_pairwise_disjoint(h, max_depth: int, c: Optional[CConstant] = None) -> VerificationReport:
    """``Delta_i & Delta_j == {}`` for all distinct I-words (empty word included) up to ``max_depth``.

    Runs brute force over every pair and the structural reduction, and
    requires both to certify every pair.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    c = _constant(c)
    h = Fraction(h)
    all_words = g.words_up_to(max_depth, include_empty=True)
    triangles = {w: g.delta_triangle(w, h) for w in all_words}
    structural = _Structural(h, c)
    report = VerificationReport("disjoint", max_depth, details={"h": format_rational(h), "words": len(all_words)})
    unknown = False
    disagreements = 0
    empty_pairs = 0
    for i, j in itertools.combinations(all_words, 2):
        report.items_checked += 1
        if not i:
            empty_pairs += 1
        brute = g.triangles_relation(triangles[i], triangles[j], c)
        try:
            struct = structural.disjoint(i, j)
        except PrecisionExhausted:
            struct = None
        if brute is Relation.UNKNOWN or struct is None:
            unknown = True
        if brute is Relation.DISJOINT and struct:
            continue
        if (brute is Relation.DISJOINT) != bool(struct):
            disagreements += 1
        kind = "unknown" if brute is Relation.UNKNOWN or struct is None else "pair"
        if len(report.failures) < 50:
            report.failures.append(
                {"kind": kind, "words": [i, j], "brute_force": brute.value, "structural": struct}
            )
    report.details.update(
        {"delta_vs_word_pairs": empty_pairs, "strategy_disagreements": disagreements}
    )
    report.precision_digits = c.precision_used
    return settle(report, unknown)


def _osc_components(N: int, h: Fraction) -> dict:
    """Components of ``a(O_N)`` for each generator ``a``, keyed by word of the triangle."""
    base = g.words_up_to(N, include_empty=True)
    comps = {a: [a + w + "h" for w in base] for a in g.I_LETTERS}
    comps["h"] = ["h" + w + "h" for w in base]
    return comps


def verify_osc(h, max_depth: int, c: Optional[CConstant] = None) -> VerificationReport:
    """Open set condition on the finite approximation ``O_N = int(Delta) u U_{|i|<=N} S_i(int Delta)``."""
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    c = _constant(c)
    h = Fraction(h)
    report = VerificationReport("osc", max_depth, details={"h": format_rational(h)})
    unknown = False
    comps = _osc_components(max_depth, h)
    tri = {w: g.cell_triangle(w, h) for ws in comps.values() for w in ws}

    for a, b in itertools.combinations(g.ALPHABET, 2):
        for u in comps[a]:
            for v in comps[b]:
                report.items_checked += 1
                rel = g.interiors_disjoint(tri[u], tri[v], c)
                if rel is Relation.DISJOINT:
                    continue
                unknown |= rel is Relation.UNKNOWN
                report.failures.append(
                    {"kind": "unknown" if rel is Relation.UNKNOWN else "overlap", "words": [u, v]}
                )

    # S_a(O_N) is made of Delta-triangles of O_{N+1}; S_h(O_N) sits inside Delta
    delta = g.delta_triangle("", h)
    for a in g.I_LETTERS:
        for w in g.words_up_to(max_depth, include_empty=True):
            report.items_checked += 1
            image = g.generator(a, h).apply_triangle(g.delta_triangle(w, h))
            if image != g.delta_triangle(a + w, h):
                report.failures.append({"kind": "invariance", "letter": a, "word": w})
    for w in comps["h"]:
        report.items_checked += 1
        try:
            inside = g.triangle_contains(delta, tri[w], c)
        except PrecisionExhausted:
            unknown = True
            report.failures.append({"kind": "unknown", "word": w})
            continue
        if not inside:
            report.failures.append({"kind": "h_image_outside_delta", "word": w})

    # first-level pieces of D: only S_1 and S_h have overlapping interiors
    overlapping = []
    for a, b in itertools.combinations(g.ALPHABET, 2):
        report.items_checked += 1
        rel = g.interiors_disjoint(g.cell_triangle(a, h), g.cell_triangle(b, h), c)
        unknown |= rel is Relation.UNKNOWN
        if rel is Relation.INTERSECTING:
            overlapping.append(f"{a}-{b}")
    report.details["d_image_interior_overlaps"] = overlapping
    report.details["exception_reproduced"] = overlapping == ["1-h"]
    if overlapping != ["1-h"]:
        report.failures.append({"kind": "d_image_pattern", "overlapping": overlapping})
    report.details["components_per_image"] = len(comps["h"])
    report.precision_digits = c.precision_used
    return settle(report, unknown)


def _union_diam2(t1: g.Triangle, t2: g.Triangle, c: CConstant) -> RationalInterval:
    pts = t1.vertices + t2.vertices
    polys = [g._dot(q - p, q - p) for p, q in itertools.combinations(pts, 2)]
    return g.max_polys(polys, c)


def junction_point(a: str, b: str, h, c: CConstant):
    """Single point where the first-level hulls ``S_a(D)`` and ``S_b(D)`` meet.

    Candidates are vertices of either hull lying in the other; exactly one
    distinct candidate is required.
    """
    t1, t2 = g.cell_triangle(a, h), g.cell_triangle(b, h)
    found = []
    for p in t1.vertices:
        if g.point_in_triangle(t2, p, c) and p not in found:
            found.append(p)
    for p in t2.vertices:
        if g.point_in_triangle(t1, p, c) and p not in found:
            found.append(p)
    return found[0] if len(found) == 1 else None


def adjacent_first_level(h, c: CConstant) -> list:
    out = []
    for a, b in itertools.combinations(g.ALPHABET, 2):
        if g.triangles_relation(g.cell_triangle(a, h), g.cell_triangle(b, h), c) is Relation.INTERSECTING:
            out.append((a, b))
    return out


def intersecting_pairs(a: str, b: str, depth: int, h, c: CConstant) -> tuple:
    """Intersecting hull pairs ``(S_{a w}(D), S_{b v}(D))`` with ``|w| = |v| = depth - 1``.

    Child hulls lie inside their parents, so only children of intersecting
    pairs can intersect; the search descends level by level.  Returns
    ``(pairs_by_depth, unknown_pairs)``.
    """
    levels = []
    unknown = []
    frontier = [(a, b)]
    levels.append(frontier)
    for _ in range(depth - 1):
        nxt = []
        for u, v in frontier:
            for x in g.ALPHABET:
                tu = g.cell_triangle(u + x, h)
                for y in g.ALPHABET:
                    rel = g.triangles_relation(tu, g.cell_triangle(v + y, h), c)
                    if rel is Relation.INTERSECTING:
                        nxt.append((u + x, v + y))
                    elif rel is Relation.UNKNOWN:
                        unknown.append((u + x, v + y))
        frontier = nxt
        levels.append(frontier)
    return levels, unknown


def verify_one_point(h, max_depth: int, c: Optional[CConstant] = None) -> VerificationReport:
    """Intersecting hull pairs of adjacent first-level pieces shrink onto one point.

    For each adjacent pair ``(a, b)`` of first-level pieces, at every depth:
    some intersecting pair exists, every intersecting pair contains the
    junction point, and the largest union diameter at least halves per level.
    """
    if max_depth < 2:
        raise ValueError("max_depth must be >= 2")
    c = _constant(c)
    h = Fraction(h)
    report = VerificationReport("onepoint", max_depth, details={"h": format_rational(h)})
    unknown = False
    families = {}
    try:
        adjacent = adjacent_first_level(h, c)
    except PrecisionExhausted:
        adjacent = []
        unknown = True
    if ("1", "h") not in adjacent:
        report.failures.append({"kind": "missing_family", "pair": ["1", "h"]})
    for a, b in adjacent:
        name = f"{a}-{b}"
        q = junction_point(a, b, h, c)
        if q is None:
            report.failures.append({"kind": "no_single_junction", "pair": [a, b]})
            continue
        levels, unk = intersecting_pairs(a, b, max_depth, h, c)
        if unk:
            unknown = True
            report.failures.extend({"kind": "unknown", "words": list(p)} for p in unk[:20])
        diams = []
        for n, pairs in enumerate(levels, start=1):
            if not pairs:
                report.failures.append({"kind": "no_witness", "family": name, "depth": n})
                diams.append(None)
                continue
            for u, v in pairs:
                report.items_checked += 1
                tu, tv = g.cell_triangle(u, h), g.cell_triangle(v, h)
                if not (g.point_in_triangle(tu, q, c) and g.point_in_triangle(tv, q, c)):
                    report.failures.append({"kind": "junction_missing", "family": name, "words": [u, v]})
            per_pair = [_union_diam2(g.cell_triangle(u, h), g.cell_triangle(v, h), c) for u, v in pairs]
            diams.append(RationalInterval(max(d.lo for d in per_pair), max(d.hi for d in per_pair)))
        for n in range(1, len(diams)):
            prev, cur = diams[n - 1], diams[n]
            if prev is None or cur is None:
                continue
            # diam(n+1) <= diam(n)/2  <=>  diam2(n+1) <= diam2(n)/4
            if not cur.hi * 4 <= prev.lo:
                report.failures.append({"kind": "no_shrink", "family": name, "depth": n + 1})
        families[name] = {
            "junction": [str(q.x), str(q.y)],
            "pairs_per_depth": [len(p) for p in levels],
        }
    report.details["families"] = families
    report.precision_digits = c.precision_used
    return settle(report, unknown)
