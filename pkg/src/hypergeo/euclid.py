"""Closed geodesics on the flat regular tetrahedron, traced on the triangular lattice.

The plane is tiled by unit equilateral triangles; the vertex at
x = i + j/2, y = j*sqrt(3)/2 gets the tetrahedron label fixed by the parities
of (i, j):

    (0, 0) -> 1    (1, 0) -> 2    (0, 1) -> 3    (1, 1) -> 4

so even rows carry {1, 2} at integer x and odd rows {3, 4} at half-integers.
In lattice coordinates the line of direction (p, q) through (x0, 0) is
i = x0 + (p/q) j, and one period runs over 0 < j <= 2q.  All positions are
exact fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .development import CrossingSequence
from .errors import DomainError, VertexHitError
from .tetrahedron import edge, opposite_edge

LABELS = {(0, 0): 1, (1, 0): 2, (0, 1): 3, (1, 1): 4}


def vertex_label(i: int, j: int) -> int:
    return LABELS[(i % 2, j % 2)]


def cartesian(i, j) -> tuple[float, float]:
    return float(i) + float(j) / 2.0, float(j) * math.sqrt(3.0) / 2.0


@dataclass(frozen=True)
class LatticeLine:
    p: int
    q: int
    x0: Fraction = Fraction(1, 2)

    @property
    def slope(self) -> float:
        return self.q * math.sqrt(3.0) / (self.q + 2 * self.p)

    def i_at(self, j) -> Fraction:
        return self.x0 + Fraction(self.p, self.q) * j


def line_for(p: int, q: int, x0=Fraction(1, 2)) -> LatticeLine:
    if q < 1 or p < 0:
        raise DomainError(f"need p >= 0 and q >= 1, got ({p}, {q})")
    if math.gcd(p, q) != 1:
        raise DomainError(f"({p}, {q}) are not coprime")
    x0 = Fraction(x0).limit_denominator(10**12) if isinstance(x0, float) else Fraction(x0)
    if not 0 < x0 < 1:
        raise DomainError(f"offset {x0} outside (0, 1)")
    return LatticeLine(p, q, x0)


def vertex_avoidance(p: int, q: int) -> bool:
    """Whether the line through the midpoint x0 = 1/2 misses every lattice vertex: exactly when q is odd."""
    if math.gcd(p, q) != 1:
        raise DomainError(f"({p}, {q}) are not coprime")
    return q % 2 == 1


def vertex_hits(line: LatticeLine, rows: int) -> list:
    """Lattice vertices on the line among rows |j| <= rows, by direct scan."""
    hits = []
    for j in range(-rows, rows + 1):
        i = line.i_at(j)
        if i.denominator == 1:
            hits.append((int(i), j))
    return hits


@dataclass(frozen=True)
class Crossing:
    edge: tuple
    t: Fraction  # position along the edge from its lower label
    fraction: Fraction  # position along the period, in (0, 1]
    ends: tuple  # lattice endpoints, lower label first


def _crossing(a, b, s: Fraction, j: Fraction, q: int) -> Crossing:
    # s is the position from lattice vertex a toward b
    la, lb = vertex_label(*a), vertex_label(*b)
    if la > lb:
        a, b, s = b, a, 1 - s
    return Crossing(edge(la, lb), s, j / (2 * q), (a, b))


def trace(line: LatticeLine, periods: int = 1):
    """Edge crossings of the line over ``periods`` periods, starting just after (x0, 0).

    Returns (CrossingSequence, list of Crossing); the sequence is cyclic and
    rotated so that it opens with the crossing of edge 12 at the period's end.
    """
    p, q = line.p, line.q
    top = 2 * q * periods
    events = {}

    def add(j: Fraction, c: Crossing):
        if j in events:
            raise VertexHitError(f"line ({p}, {q}) passes through a lattice vertex at j = {j}")
        events[j] = c

    # rows j = k
    for k in range(1, top + 1):
        i = line.i_at(k)
        fl = math.floor(i)
        add(Fraction(k), _crossing((fl, k), (fl + 1, k), i - fl, Fraction(k), q))
    # columns i = m: j = (m - x0) q / p
    if p > 0:
        for m in range(math.ceil(line.x0), math.floor(line.i_at(top)) + 1):
            j = (m - line.x0) * Fraction(q, p)
            if 0 < j <= top:
                fl = math.floor(j)
                add(j, _crossing((m, fl), (m, fl + 1), j - fl, j, q))
    # diagonals i + j = m: j = (m - x0) q / (p + q)
    for m in range(math.ceil(line.x0), math.floor(line.i_at(top) + top) + 1):
        j = (m - line.x0) * Fraction(q, p + q)
        if 0 < j <= top:
            fl = math.floor(j)
            add(j, _crossing((m - fl, fl), (m - fl - 1, fl + 1), j - fl, j, q))

    crossings = [events[j] for j in sorted(events)]
    if periods == 1:
        # the period ends on edge 12 (vertex parities repeat); put it first
        crossings = crossings[-1:] + crossings[:-1]
        crossings[0] = Crossing(crossings[0].edge, crossings[0].t, Fraction(0), crossings[0].ends)
    seq = CrossingSequence.from_crossings([c.edge for c in crossings], cyclic=True)
    return seq, crossings


@dataclass
class MidpointReport:
    p: int
    q: int
    count: int
    midpoints: list  # (index, edge, fraction)
    pairs: list
    ok: bool


def check_midpoint_lemma(p: int, q: int) -> MidpointReport:
    """Midpoint crossings sit on two opposite edge pairs at quarter points of the period."""
    _, cs = trace(line_for(p, q))
    mids = [(k, c.edge, c.fraction) for k, c in enumerate(cs) if c.t == Fraction(1, 2)]
    edges = [e for _, e, _ in mids]
    pairs = sorted({tuple(sorted((e, opposite_edge(e)))) for e in edges if opposite_edge(e) in edges})
    quarters = sorted(f for _, _, f in mids) == [Fraction(k, 4) for k in range(4)]
    ok = len(mids) == 4 and len(set(edges)) == 4 and len(pairs) == 2 and quarters
    return MidpointReport(p, q, len(cs), mids, pairs, ok)


def half_turn(e) -> dict:
    """Vertex relabeling induced by the half-turn about the midpoint of edge e."""
    u, v = edge(e)
    w, x = opposite_edge(e)
    return {u: v, v: u, w: x, x: w}


def _image(c: Crossing, perm: dict) -> tuple:
    lo, hi = c.edge
    t = c.t if perm[lo] < perm[hi] else 1 - c.t
    return edge(perm[lo], perm[hi]), t


@dataclass
class QuarterReport:
    p: int
    q: int
    counts: list  # crossings strictly between consecutive midpoint crossings
    mismatches: list
    ok: bool


def quarter_symmetry(p: int, q: int) -> QuarterReport:
    """Equal quarters, each the half-turn image of the previous one about the midpoint between them."""
    _, cs = trace(line_for(p, q))
    n = len(cs)
    anchors = [k for k, c in enumerate(cs) if c.t == Fraction(1, 2)]
    counts = [(anchors[(k + 1) % len(anchors)] - a - 1) % n for k, a in enumerate(anchors)]
    mismatches = []
    for b in anchors:
        perm = half_turn(cs[b].edge)
        for m in range(1, n // 2 + 1):
            before, after = cs[(b - m) % n], cs[(b + m) % n]
            if _image(before, perm) != (after.edge, after.t):
                mismatches.append((b, m))
    ok = len(anchors) == 4 and len(set(counts)) == 1 and not mismatches
    return QuarterReport(p, q, counts, mismatches, ok)


def survey_pairs(max_sum: int) -> list:
    """Coprime (p, q) with q odd and q + 2p <= max_sum."""
    out = []
    for q in range(1, max_sum + 1, 2):
        for p in range(0, (max_sum - q) // 2 + 1):
            if math.gcd(p, q) == 1:
                out.append((p, q))
    return sorted(out)


def survey(max_sum: int) -> list:
    rows = []
    for p, q in survey_pairs(max_sum):
        mid = check_midpoint_lemma(p, q)
        quart = quarter_symmetry(p, q)
        rows.append({
            "p": p,
            "q": q,
            "crossings": mid.count,
            "midpoint_edges": [list(e) for _, e, _ in mid.midpoints],
            "midpoint_fractions": [str(f) for _, _, f in mid.midpoints],
            "quarter_counts": quart.counts,
            "midpoint_lemma": mid.ok,
            "quarter_symmetry": quart.ok,
        })
    return rows
