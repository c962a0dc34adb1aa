"""Finite-depth cell decompositions of the attractor and their adjacency graphs.

A depth-``n`` cell is the hull ``S_w(D)`` for a word ``w`` in ``{0,1,2,h}^n``.
Since every ``S_a(D)`` lies in ``D``, each hull contains the piece of the
attractor addressed by ``w``, so hull adjacency can only over-connect: a tree
at every depth is evidence for the dendrite structure.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import geometry as g
from .geometry import Relation
from .interval import RationalInterval, format_rational
from .report import VerificationReport, settle
from .ternary import (
    CConstant,
    CantorPoint,
    NotFoundWithinBound,
    PrecisionExhausted,
    enumerate_tuples,
    find_shift,
    shift_interval,
)


@dataclass(frozen=True)
class Cell:
    word: str
    hull: g.Triangle

    @property
    def depth(self) -> int:
        return len(self.word)


@dataclass
class AdjacencyGraph:
    vertices: list
    edges: set = field(default_factory=set)
    unknown_pairs: set = field(default_factory=set)
    candidate_pairs: int = 0

    @property
    def conclusive(self) -> bool:
        return not self.unknown_pairs

    def edge_list(self) -> list:
        return sorted(self.edges)

    def neighbours(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


def cells_at_depth(n: int, h, c: Optional[CConstant] = None) -> list:
    """The ``4^n`` cells of depth ``n`` in lexicographic word order (``0 < 1 < 2 < h``)."""
    if n < 0:
        raise ValueError("depth must be >= 0")
    if c is not None:
        g.base_triangle(h, c)  # raises NotInvariant when hulls would not nest
    return [Cell(w, g.cell_triangle(w, h)) for w in g.words(n, g.ALPHABET)]


def adjacency_graph(n: int, h, c: Optional[CConstant] = None) -> AdjacencyGraph:
    """Cells of depth ``n`` joined when their closed hulls certainly intersect.

    Candidate pairs come from a sweep over outer bounding boxes; pairs whose
    boxes are apart are certainly disjoint and never reach the exact test.
    """
    if n < 1:
        raise ValueError("depth must be >= 1")
    c = c if c is not None else CConstant()
    cells = cells_at_depth(n, h, c)
    graph = AdjacencyGraph([cell.word for cell in cells])
    boxed = sorted(((cell.hull.box(c), cell) for cell in cells), key=lambda bc: (bc[0][0], bc[1].word))
    for idx, (box, cell) in enumerate(boxed):
        for other_box, other in boxed[idx + 1 :]:
            if other_box[0] > box[1]:
                break
            if other_box[2] > box[3] or box[2] > other_box[3]:
                continue
            graph.candidate_pairs += 1
            rel = g.triangles_relation(cell.hull, other.hull, c)
            pair = tuple(sorted((cell.word, other.word)))
            if rel is Relation.INTERSECTING:
                graph.edges.add(pair)
            elif rel is Relation.UNKNOWN:
                graph.unknown_pairs.add(pair)
    return graph


def is_tree(graph: AdjacencyGraph) -> bool:
    """Connected with ``|E| = |V| - 1``."""
    if graph.unknown_pairs:
        raise ValueError("is_tree needs a conclusive graph")
    n = len(graph.vertices)
    if n == 0:
        return False
    if len(graph.edges) != n - 1:
        return False
    adj = graph.neighbours()
    start = graph.vertices[0]
    seen = {start}
    queue = deque([start])
    while queue:
        for nb in adj[queue.popleft()]:
            if nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return len(seen) == n


def write_edge_list(graph: AdjacencyGraph, path) -> None:
    Path(path).write_text("".join(f"{u} {v}\n" for u, v in graph.edge_list()))


def read_edge_list(path) -> list:
    out = []
    for line in Path(path).read_text().splitlines():
        if line.strip():
            u, v = line.split()
            out.append((u, v))
    return out


def verify_tree(h, max_depth: int, c: Optional[CConstant] = None) -> VerificationReport:
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    c = c if c is not None else CConstant()
    h = Fraction(h)
    report = VerificationReport("tree", max_depth, details={"h": format_rational(h)})
    unknown = False
    per_depth = []
    prev_edges = None
    for n in range(1, max_depth + 1):
        graph = adjacency_graph(n, h, c)
        report.items_checked += graph.candidate_pairs
        if graph.unknown_pairs:
            unknown = True
            report.failures.extend(
                {"kind": "unknown", "depth": n, "words": list(p)} for p in sorted(graph.unknown_pairs)[:20]
            )
            tree = None
        else:
            tree = is_tree(graph)
            if not tree:
                report.failures.append(
                    {"kind": "not_tree", "depth": n, "vertices": len(graph.vertices), "edges": len(graph.edges)}
                )
        if prev_edges is not None:
            for u, v in sorted(graph.edges):
                pu, pv = u[:-1], v[:-1]
                if pu != pv and tuple(sorted((pu, pv))) not in prev_edges:
                    report.failures.append({"kind": "refinement", "depth": n, "words": [u, v]})
        prev_edges = graph.edges
        per_depth.append(
            {
                "depth": n,
                "vertices": len(graph.vertices),
                "edges": len(graph.edges),
                "candidate_pairs": graph.candidate_pairs,
                "tree": tree,
            }
        )
        if n == 1:
            report.details["depth1_edges"] = [f"{u}-{v}" for u, v in graph.edge_list()]
    report.details["graphs"] = per_depth
    report.precision_digits = c.precision_used
    return settle(report, unknown)


def address_point(address: str, h, c: Optional[CConstant] = None, p: Optional[int] = None) -> g.IntervalPoint:
    """Bounding box of the hull addressed by a finite prefix of an address."""
    address = g.check_word(address)
    if not address:
        raise ValueError("address must be nonempty")
    c = c if c is not None else CConstant()
    xlo, xhi, ylo, yhi = g.cell_triangle(address, h).box(c, p)
    return g.IntervalPoint(RationalInterval(xlo, xhi), RationalInterval(ylo, yhi))


def fixed_point(letter: str, h) -> g.Point2:
    """Exact fixed point of one generator."""
    h = Fraction(h)
    if letter == "h":
        # x = c - h y, y = h x
        k = 1 / (1 + h * h)
        return g.Point2(g.CLinear(Fraction(0), k), g.CLinear(Fraction(0), h * k))
    j = int(letter)
    return g.Point2.of(Fraction(j, 2), 0)


def sigma_distance_certified(k: int, target: CantorPoint, c: CConstant) -> bool:
    """``|sigma^k(c) - 0.y| < 3^-n`` using enclosures of ``sigma^k(c)``."""
    n = len(target)
    y = target.value
    bound = Fraction(1, 3**n)
    extra = 8
    while True:
        p = n + extra
        avail = c.stream.available
        if avail is not None and k + p > avail:
            return False
        iv = shift_interval(k, p, c.stream)
        if iv.hi - y < bound and y - iv.lo < bound:
            return True
        if not (iv.lo - y < bound and y - iv.hi < bound):
            return False
        if extra > c.precision_cap:
            raise PrecisionExhausted(f"distance of sigma^{k}(c) to {target.digits} undecided")
        extra *= 2


def postcritical_density(tuple_len: int, h=None, c: Optional[CConstant] = None, max_search: int = 10_000) -> VerificationReport:
    """Every ``{0,2}``-tuple of length ``tuple_len`` is matched by some shift of ``c``.

    ``h`` does not enter: the shifts act on the digits of ``c`` only.  The
    report records the largest shift used (a density modulus) and whether the
    located shifts are pairwise distinct as digit sequences.
    """
    if tuple_len < 1:
        raise ValueError("tuple_len must be >= 1")
    c = c if c is not None else CConstant()
    report = VerificationReport("density", tuple_len)
    targets = [t for t in enumerate_tuples(tuple_len) if len(t) == tuple_len]
    shifts = {}
    for t in targets:
        point = CantorPoint(t)
        report.items_checked += 1
        try:
            k = find_shift(point, max_search, c.stream)
        except NotFoundWithinBound:
            report.failures.append({"kind": "not_found", "target": point.digits, "max_search": max_search})
            continue
        if not sigma_distance_certified(k, point, c):
            report.failures.append({"kind": "distance", "target": point.digits, "k": k})
            continue
        shifts[point.digits] = k
    prefixes = {c.stream.digits(k + tuple_len)[k:] for k in shifts.values()}
    distinct = len(prefixes) == len(shifts) == len(targets)
    if shifts and not distinct:
        report.failures.append({"kind": "shifts_not_distinct", "distinct": len(prefixes)})
    report.details = {
        "targets": len(targets),
        "located": len(shifts),
        "max_shift": max(shifts.values()) if shifts else None,
        "distinct_shift_prefixes": len(prefixes),
        "shifts": dict(sorted(shifts.items())),
    }
    report.precision_digits = tuple_len + max(shifts.values(), default=0)
    return settle(report, False)
