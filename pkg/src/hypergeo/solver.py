"""Closed geodesics on the regular hyperbolic tetrahedron.

The primary solver takes the holonomy of one period of a crossing sequence;
when it is a hyperbolic translation its axis, read in each face chart, is the
closed geodesic.  Two independent routes check it: the midpoint construction
for the three canonical classes, and a Newton shooting solver that searches
for a closing ray from random starts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .development import (
    CrossingSequence,
    Development,
    canonical_sequence,
    develop,
    midpoint_anchors,
    validate,
)
from .errors import ConstructionFailed, DegenerateInputError, SequenceError
from .hyperbolic import (
    J,
    GeodesicLine,
    mdot,
    PlanePoint,
    angle_at,
    boost,
    classify,
    direction_at,
    distance,
    distance_to_line,
    from_polar,
    line_through,
    segment_crossing,
)
from .tetrahedron import (
    OPPOSITE_PAIRS,
    TetraMetric,
    apex,
    face_chart,
    label,
    opposite_edge,
    theorem2_rhs,
)

VERTEX_EPS = 1e-9
CHECK_TOL = 1e-9
MIDPOINT_TOL = 1e-8


@dataclass
class ClosedGeodesic:
    metric: TetraMetric
    sequence: CrossingSequence
    crossings: list  # (edge, t) with t measured from the lower-labelled vertex
    segment_lengths: list  # segment i runs across face i, from crossing i-1 to crossing i
    total_length: float
    min_vertex_distance: float = math.nan
    simple: bool = True
    translation_length: Optional[float] = None
    vertex_distances: dict = field(default_factory=dict)
    intersections: list = field(default_factory=list)
    angle_residuals: list = field(default_factory=list)
    method: str = "axis"

    realizable = True

    @property
    def t_values(self) -> list:
        return [t for _, t in self.crossings]

    def crossing_point(self, i: int, step: int) -> PlanePoint:
        """Crossing i expressed in the chart of the face of ``step``."""
        e, t = self.crossings[i % len(self.crossings)]
        return face_chart(self.metric, self.sequence.steps[step % len(self.sequence)][0]).edge_point(e, t)

    def segments(self):
        """Yield (step, face, start point, end point) in that face's chart."""
        n = len(self.crossings)
        for i in range(n):
            f = self.sequence.steps[i][0]
            yield i, f, self.crossing_point(i - 1, i), self.crossing_point(i, i)


@dataclass(frozen=True)
class NotRealizable:
    reason: str
    index: Optional[int] = None
    detail: str = ""

    realizable = False


def _finish(g: ClosedGeodesic) -> ClosedGeodesic:
    """Fill in the derived certificates shared by every solver."""
    g.angle_residuals = angle_residuals(g)
    simple, points = is_simple(g)
    g.simple = simple
    g.intersections = points
    dists = vertex_distances(g)
    g.vertex_distances = dists
    g.min_vertex_distance = min(dists.values())
    return g


def solve_class(seq: CrossingSequence, metric: TetraMetric, dev: Optional[Development] = None):
    """Closed geodesic in the class of ``seq`` via the holonomy axis, or NotRealizable."""
    report = validate(seq)
    if not report:
        raise SequenceError(report.message, report.index)
    if not seq.cyclic:
        raise SequenceError("solve_class needs a cyclic sequence")
    dev = dev or develop(seq, metric)
    n = len(seq)
    base = classify(dev.holonomy_at(0))
    if base.kind != "hyperbolic":
        return NotRealizable("holonomy-not-hyperbolic", None, base.kind)

    crossings, lengths, entries = [], [], []
    for i in range(n):
        # the axis of the holonomy based at face i passes through that face's chart
        cls = classify(dev.holonomy_at(i))
        chart = dev.chart(i)
        points = []
        for k, e in (("entry", dev.entry_of(i)), ("exit", dev.exit_of(i))):
            lo, hi = e
            hit = segment_crossing(chart[lo], chart[hi], cls.axis)
            if hit is None:
                return NotRealizable(f"axis-misses-edge-{i}", i, f"{k} edge {label(e)} of face {label(chart.face)}")
            s, x = hit
            if not VERTEX_EPS < s < 1.0 - VERTEX_EPS:
                return NotRealizable(f"axis-misses-edge-{i}", i, f"{k} edge {label(e)} at t={s:.6g}")
            points.append((s, x))
        (t_in, x_in), (t_out, x_out) = points
        if cls.axis_position(x_out) <= cls.axis_position(x_in):
            return NotRealizable("order-violation", i, f"face {label(chart.face)} is traversed backwards")
        crossings.append((dev.exit_of(i), t_out))
        entries.append(t_in)
        lengths.append(distance(x_in, x_out))

    g = ClosedGeodesic(
        metric,
        seq,
        crossings,
        lengths,
        float(math.fsum(lengths)),
        translation_length=base.translation_length,
        method="axis",
    )
    return _finish(g)


def _chord_crossings(dev: Development, start: int, stop: int, t_start: float, t_stop: float):
    """Straight chord from crossing ``start`` to crossing ``stop`` developed in the chart after ``start``.

    Returns the points of every crossing from start to stop (inclusive) in
    that chart, and the edge parameters of the intermediate crossings.
    """
    root = start + 1
    m0 = dev.chart(root).edge_point(dev.exit_of(start), t_start)
    m1 = dev.relative(root, stop)(dev.chart(stop).edge_point(dev.exit_of(stop), t_stop))
    chord = line_through(m0, m1)
    pts, ts = [m0], []
    for c in range(start + 1, stop):
        lo, hi = dev.exit_of(c)
        rel = dev.relative(root, c)
        chart = dev.chart(c)
        hit = segment_crossing(rel(chart[lo]), rel(chart[hi]), chord)
        if hit is None or not VERTEX_EPS < hit[0] < 1.0 - VERTEX_EPS:
            raise ConstructionFailed(f"chord misses edge {label(dev.exit_of(c))} at crossing {c % len(dev.sequence)}")
        ts.append(hit[0])
        pts.append(hit[1])
    pts.append(m1)
    return pts, ts


def construct_midpoint(cls: str, metric: TetraMetric, tol: float = CHECK_TOL) -> ClosedGeodesic:
    """Join the edge midpoints of a canonical class by chords and check the result is a closed geodesic."""
    seq = canonical_sequence(cls)
    anchors = midpoint_anchors(cls)
    dev = develop(seq, metric)
    n = len(seq)
    t = [math.nan] * n
    lengths = [math.nan] * n
    quarters = []
    for j, a in enumerate(anchors):
        b = anchors[j + 1] if j + 1 < len(anchors) else anchors[0] + n
        pts, ts = _chord_crossings(dev, a, b, 0.5, 0.5)
        quarters.append((a, b, pts))
        t[a % n] = 0.5
        for k, tc in enumerate(ts):
            t[(a + 1 + k) % n] = tc
        for k in range(len(pts) - 1):
            lengths[(a + 1 + k) % n] = distance(pts[k], pts[k + 1])

    # straightness at each anchor, including the return to the first midpoint
    for j, (a, b, pts) in enumerate(quarters):
        nxt_a, nxt_b, nxt_pts = quarters[(j + 1) % len(quarters)]
        frame_step = b + 1
        into = dev.relative(frame_step, a + 1)
        prev = into(pts[-2])
        mid = dev.chart(frame_step).edge_point(dev.exit_of(b), 0.5)
        turn = angle_at(mid, prev, nxt_pts[1])
        if abs(turn - math.pi) > tol:
            raise ConstructionFailed(
                f"chords bend by {math.pi - turn:.3e} at the midpoint of {label(dev.exit_of(b))}"
            )

    g = ClosedGeodesic(
        metric,
        seq,
        [(seq.steps[i][1], t[i]) for i in range(n)],
        lengths,
        float(math.fsum(lengths)),
        translation_length=classify(dev.holonomy_at(0)).translation_length,
        method="midpoint",
    )
    _finish(g)
    worst = max(abs(math.pi - (x + y)) for x, y in g.angle_residuals)
    if worst > tol:
        raise ConstructionFailed(f"angle condition fails by {worst:.3e}")
    return g


def angle_residuals(g: ClosedGeodesic) -> list:
    """Angle with the edge on the leaving face and on the entered face, at every crossing.

    Both angles are measured toward the edge's lower vertex; a geodesic
    crosses straight, so each pair sums to pi.
    """
    out = []
    n = len(g.crossings)
    for i in range(n):
        e, _ = g.crossings[i]
        lo = e[0]
        here = face_chart(g.metric, g.sequence.steps[i][0])
        there = face_chart(g.metric, g.sequence.steps[(i + 1) % n][0])
        x_here, x_there = g.crossing_point(i, i), g.crossing_point(i, i + 1)
        before = angle_at(x_here, here[lo], g.crossing_point(i - 1, i))
        after = angle_at(x_there, there[lo], g.crossing_point(i + 1, i + 1))
        out.append((before, after))
    return out


def _segment_hits(p0, p1, q0, q1, tol: float):
    """Interior intersection of two Klein-model chords, or None; endpoint contacts are ignored."""
    p0, p1, q0, q1 = (np.array(v.klein if isinstance(v, PlanePoint) else v, dtype=float) for v in (p0, p1, q0, q1))
    r, s = p1 - p0, q1 - q0
    denom = r[0] * s[1] - r[1] * s[0]
    if abs(denom) < 1e-15:
        return None
    w = q0 - p0
    u = (w[0] * s[1] - w[1] * s[0]) / denom
    v = (w[0] * r[1] - w[1] * r[0]) / denom
    if tol < u < 1.0 - tol and tol < v < 1.0 - tol:
        return tuple(p0 + u * r)
    return None


def segment_intersections(segments, tol: float = CHECK_TOL) -> list:
    """Pairwise interior intersections among (start, end) chords in one chart."""
    hits = []
    for i in range(len(segments)):
        for j in range(i + 1, len(segments)):
            x = _segment_hits(*segments[i], *segments[j], tol)
            if x is not None:
                hits.append((i, j, x))
    return hits


def is_simple(g: ClosedGeodesic, tol: float = CHECK_TOL):
    """Whether the geodesic avoids itself; also returns the self-intersection points found."""
    by_face = {}
    for i, f, p, q in g.segments():
        by_face.setdefault(f, []).append((i, p, q))
    points = []
    for f, segs in sorted(by_face.items()):
        for a, b, x in segment_intersections([(p, q) for _, p, q in segs], tol):
            points.append({"face": f, "segments": (segs[a][0], segs[b][0]), "klein": x})
    n = len(g.crossings)
    for i in range(n):
        for j in range(i + 1, n):
            (ei, ti), (ej, tj) = g.crossings[i], g.crossings[j]
            if ei == ej and abs(ti - tj) < tol:
                points.append({"edge": ei, "crossings": (i, j), "t": ti})
    return not points, points


def point_segment_distance(p: PlanePoint, a: PlanePoint, b: PlanePoint) -> float:
    da, db = distance(p, a), distance(p, b)
    if distance(a, b) < 1e-15 or da < 1e-15 or db < 1e-15:
        return min(da, db)
    # the foot of the perpendicular is inside the segment iff neither end angle is obtuse
    if angle_at(a, p, b) <= math.pi / 2 and angle_at(b, p, a) <= math.pi / 2:
        return distance_to_line(p, line_through(a, b))
    return min(da, db)


def vertex_distances(g: ClosedGeodesic) -> dict:
    """Distance from each vertex to the geodesic, over the segments on faces at that vertex."""
    best = {v: math.inf for v in (1, 2, 3, 4)}
    for _, f, p, q in g.segments():
        chart = face_chart(g.metric, f)
        for v in f:
            best[v] = min(best[v], point_segment_distance(chart[v], p, q))
    return best


@dataclass
class Theorem1Report:
    applicable: bool
    midpoint_crossings: list = field(default_factory=list)
    pairs: list = field(default_factory=list)
    ok: bool = False


def check_theorem1(g: ClosedGeodesic, tol: float = MIDPOINT_TOL) -> Theorem1Report:
    """Midpoint property: a simple closed geodesic bisects two pairs of opposite edges."""
    if not g.simple:
        return Theorem1Report(False)
    found = [(i, e) for i, (e, t) in enumerate(g.crossings) if abs(t - 0.5) < tol]
    edges = {e for _, e in found}
    pairs = [pair for pair in OPPOSITE_PAIRS if pair[0] in edges and pair[1] in edges]
    ok = len(found) == 4 and len(edges) == 4 and len(pairs) == 2
    return Theorem1Report(True, found, pairs, ok)


@dataclass
class Theorem2Report:
    applicable: bool
    tanh_d: float = math.nan
    rhs: float = math.nan
    margin: float = math.nan
    status: str = "not-applicable"  # holds | inconclusive | violated


def check_theorem2(g: ClosedGeodesic, inconclusive_band: float = 1e-12) -> Theorem2Report:
    """Vertex-distance bound: tanh(d) > cos(3 alpha / 2) tanh(edge length)."""
    if not g.simple:
        return Theorem2Report(False)
    td = math.tanh(g.min_vertex_distance)
    rhs = theorem2_rhs(g.metric.alpha)
    margin = td - rhs
    if margin > inconclusive_band:
        status = "holds"
    elif margin >= -inconclusive_band:
        status = "inconclusive"
    else:
        status = "violated"
    return Theorem2Report(True, td, rhs, margin, status)


def max_crossing_deviation(g1: ClosedGeodesic, g2: ClosedGeodesic) -> float:
    if [e for e, _ in g1.crossings] != [e for e, _ in g2.crossings]:
        return math.inf
    return max(abs(t1 - t2) for (_, t1), (_, t2) in zip(g1.crossings, g2.crossings))


# --- shooting -----------------------------------------------------------------
# The ray is carried as an oriented line (its pole, with the direction of travel
# on the left-normal convention of ``line_through``).  Poles map linearly under
# the gluings, so the closure map is smooth wherever consecutive lines meet.


def _tangent(line: GeodesicLine, x: PlanePoint) -> np.ndarray:
    """Unit tangent of the oriented line at x (Minkowski cross product)."""
    u = J @ np.cross(line.pole, x.vec)
    return u / math.sqrt(mdot(u, u))


def _toward(x: PlanePoint, v: PlanePoint) -> np.ndarray:
    w = v.vec + mdot(v.vec, x.vec) * x.vec
    return w / math.sqrt(mdot(w, w))


def _launch(dev: Development, t0: float, theta: float) -> GeodesicLine:
    """Oriented line through the point t0 of the entry edge of step 0.

    theta is the angle between the direction of travel and the direction of
    the edge's lower vertex, opening into the face.
    """
    chart = dev.chart(0)
    lo, hi = dev.entry_of(0)
    s = chart.edge_point((lo, hi), t0)
    base = direction_at(s, chart[lo])
    toward_apex = direction_at(s, chart[apex(chart.face, (lo, hi))])
    side = 1.0 if math.sin(toward_apex - base) > 0 else -1.0
    return line_through(s, boost(s)(from_polar(1.0, base + side * theta)))


def shoot(dev: Development, t0: float, theta: float):
    """Carry the oriented line through one period of the sequence.

    Returns (edge parameters of every crossing, return angle), where the last
    crossing lies on the starting edge; None when two lines fail to meet.
    Parameters may leave (0, 1) for lines that do not follow the faces.
    """
    n = len(dev.sequence)
    line = _launch(dev, t0, theta)
    ts = []
    x = None
    for i in range(n):
        chart = dev.chart(i)
        lo, hi = dev.exit_of(i)
        hit = segment_crossing(chart[lo], chart[hi], line)
        if hit is None:
            return None
        t, x = hit
        ts.append(t)
        if i + 1 < n:
            line = GeodesicLine.from_pole(dev.gluings[i].inverse().m @ line.pole)
    # back in the chart of step n - 1; the start edge is its exit edge
    chart = dev.chart(n - 1)
    lo, _ = dev.exit_of(n - 1)
    here = dev.gluings[n - 1].inverse()
    x0, line0 = here(x), GeodesicLine.from_pole(here.m @ line.pole)
    c = mdot(_tangent(line0, x0), _toward(x0, dev.chart(0)[lo]))
    return ts, math.acos(max(-1.0, min(1.0, c)))


def closure_residual(dev: Development, t0: float, theta: float):
    """2-vector (return offset along the start edge, return angle mismatch), or None."""
    out = shoot(dev, t0, theta)
    if out is None:
        return None
    ts, ang = out
    return np.array([ts[-1] - t0, ang - theta])


def start_state(g: ClosedGeodesic) -> tuple[float, float]:
    """(t0, theta) of a closed geodesic on the entry edge of step 0, in the convention of ``shoot``."""
    n = len(g.crossings)
    chart = face_chart(g.metric, g.sequence.steps[0][0])
    lo = g.crossings[n - 1][0][0]
    x = g.crossing_point(n - 1, 0)
    return g.crossings[n - 1][1], angle_at(x, chart[lo], g.crossing_point(0, 0))


def _bends(dev: Development, t: np.ndarray) -> np.ndarray:
    """Signed turning angle of the broken line through the crossing points t."""
    n = len(t)
    out = np.empty(n)
    for i in range(n):
        chart = dev.chart(i)
        a = chart.edge_point(dev.entry_of(i), t[i - 1])
        x = chart.edge_point(dev.exit_of(i), t[i])
        nxt = dev.chart(i + 1).edge_point(dev.exit_of(i + 1), t[(i + 1) % n])
        b = dev.relative(i, i + 1)(nxt)
        turn = direction_at(x, b) - direction_at(x, a) - math.pi
        out[i] = math.remainder(turn, 2.0 * math.pi)
    return out


def newton_close(dev: Development, t_init, max_iter: int = 100, tol: float = 1e-11, h: float = 1e-7):
    """Newton iteration on the bends at all crossings, unknowns = the crossing parameters.

    Steps are halved while the residual grows or a parameter leaves (0, 1).
    Returns the converged parameters or None.
    """
    t = np.array(t_init, dtype=float)
    n = len(t)
    m = next((m for m in range(3, n) if n % m == 0), n)
    groups = [list(range(c, n, m)) for c in range(m)]
    r = _bends(dev, t)
    for _ in range(max_iter):
        norm = float(np.linalg.norm(r))
        if norm < tol:
            return t
        # bend i only sees t[i-1], t[i], t[i+1]: columns far enough apart share one difference
        jac = np.zeros((n, n))
        for cols in groups:
            dt = np.zeros(n)
            dt[cols] = h
            d = (_bends(dev, t + dt) - _bends(dev, t - dt)) / (2.0 * h)
            for k in cols:
                for i in {(k - 1) % n, k, (k + 1) % n}:
                    jac[i, k] = d[i]
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            return None
        lam = 1.0
        while True:
            cand = t + lam * step
            if np.all((cand > h) & (cand < 1.0 - h)):
                rc = _bends(dev, cand)
                if np.linalg.norm(rc) < norm:
                    t, r = cand, rc
                    break
            lam *= 0.5
            if lam < 1e-8:
                return None
    return t if float(np.linalg.norm(r)) < tol else None


@dataclass
class UniquenessReport:
    trials: int
    converged: int = 0
    non_converged: int = 0
    max_deviation: float = 0.0
    distinct: list = field(default_factory=list)
    solutions: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.distinct


def perturbation_uniqueness(
    seq: CrossingSequence,
    metric: TetraMetric,
    trials: int,
    seed: int = 0,
    reference: Optional[ClosedGeodesic] = None,
    tol: float = MIDPOINT_TOL,
) -> UniquenessReport:
    """Close broken lines from random crossing parameters; every solution must be the axis one."""
    report = UniquenessReport(trials)
    if trials <= 0:
        return report
    dev = develop(seq, metric)
    if reference is None:
        reference = solve_class(seq, metric, dev)
        if not reference.realizable:
            raise ValueError(f"sequence is not realizable: {reference.reason}")
    ref_t = np.array(reference.t_values)
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        ts = newton_close(dev, rng.uniform(0.05, 0.95, size=len(seq)))
        if ts is None:
            report.non_converged += 1
            continue
        report.converged += 1
        dev_max = float(np.max(np.abs(ts - ref_t)))
        report.solutions.append([float(t) for t in ts])
        report.max_deviation = max(report.max_deviation, dev_max)
        if dev_max > tol:
            report.distinct.append([float(t) for t in ts])
    return report
