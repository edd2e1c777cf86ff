"""The regular tetrahedron in hyperbolic space: metric and combinatorics.

A regular tetrahedron is fixed by its face angle alpha in (0, pi/3); the edge
length follows from the hyperbolic law of cosines for an equilateral triangle.
Vertices are labelled 1..4, edges are sorted pairs and faces sorted triples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError
from .hyperbolic import PlanePoint, from_polar, point_along

VERTICES = (1, 2, 3, 4)
EDGES = tuple(itertools.combinations(VERTICES, 2))
FACES = tuple(itertools.combinations(VERTICES, 3))
OPPOSITE_PAIRS = (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3)))

# Each face's vertices in counterclockwise order for one orientation of the
# surface; every edge runs in opposite directions in its two faces, so all
# edge gluings between charts are orientation preserving.
ORIENTED_FACES = {
    (1, 2, 3): (1, 3, 2),
    (1, 2, 4): (1, 2, 4),
    (1, 3, 4): (1, 4, 3),
    (2, 3, 4): (2, 3, 4),
}

Edge = tuple[int, int]
Face = tuple[int, int, int]


def edge(*labels) -> Edge:
    """Normalize an edge given as "12", (1, 2), [2, 1] or edge(1, 2)."""
    if len(labels) == 1:
        labels = labels[0]
    if isinstance(labels, str):
        labels = tuple(int(c) for c in labels.strip())
    e = tuple(sorted(int(v) for v in labels))
    if e not in EDGES:
        raise DomainError(f"unknown edge {labels!r}")
    return e


def face(*labels) -> Face:
    if len(labels) == 1:
        labels = labels[0]
    if isinstance(labels, str):
        labels = tuple(int(c) for c in labels.strip())
    f = tuple(sorted(int(v) for v in labels))
    if f not in FACES:
        raise DomainError(f"unknown face {labels!r}")
    return f


def label(x) -> str:
    return "".join(str(v) for v in x)


def opposite_edge(e) -> Edge:
    e = edge(e)
    return tuple(v for v in VERTICES if v not in e)


def faces_of_edge(e) -> tuple[Face, Face]:
    e = edge(e)
    f1, f2 = (f for f in FACES if set(e) <= set(f))
    return f1, f2


def other_face(e, f) -> Face:
    e, f = edge(e), face(f)
    f1, f2 = faces_of_edge(e)
    if f == f1:
        return f2
    if f == f2:
        return f1
    raise DomainError(f"edge {label(e)} is not on face {label(f)}")


def edges_of_face(f) -> tuple[Edge, Edge, Edge]:
    f = face(f)
    return tuple(itertools.combinations(f, 2))


def common_face(e1, e2):
    """The face containing both edges, or None for opposite edges."""
    e1, e2 = edge(e1), edge(e2)
    for f in FACES:
        if set(e1) <= set(f) and set(e2) <= set(f):
            return f
    return None


def apex(f, e) -> int:
    """The vertex of face f not on edge e."""
    (v,) = set(face(f)) - set(edge(e))
    return v


def even_permutations():
    """The 12 orientation-preserving symmetries, as dicts on vertex labels."""
    out = []
    for perm in itertools.permutations(VERTICES):
        inversions = sum(1 for i, j in itertools.combinations(range(4), 2) if perm[i] > perm[j])
        if inversions % 2 == 0:
            out.append(dict(zip(VERTICES, perm)))
    return out


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < math.pi / 3:
        raise DomainError(f"face angle {alpha} outside (0, pi/3)")


def edge_length(alpha: float) -> float:
    _check_alpha(alpha)
    c = math.cos(alpha)
    return math.acosh(c / (1.0 - c))


def tanh_edge(alpha: float) -> float:
    _check_alpha(alpha)
    c = math.cos(alpha)
    return math.sqrt(2.0 * c - 1.0) / c


def theorem2_rhs(alpha: float) -> float:
    """Lower bound on tanh(d) for a simple closed geodesic at vertex distance d."""
    return math.cos(1.5 * alpha) * tanh_edge(alpha)


def theorem2_bound(alpha: float) -> float:
    """Critical vertex distance artanh(cos(3a/2) tanh(edge))."""
    return math.atanh(theorem2_rhs(alpha))


def circumradius(alpha: float) -> float:
    """Distance from a face's center to its vertices."""
    # right triangle center / edge midpoint / vertex: cosh R = cot(pi/3) cot(alpha/2)
    _check_alpha(alpha)
    return math.acosh(1.0 / (math.sqrt(3.0) * math.tan(alpha / 2.0)))


def inradius(alpha: float) -> float:
    """Distance from a face's center to the midpoints of its sides."""
    _check_alpha(alpha)
    return math.acosh(2.0 * math.cos(alpha / 2.0) / math.sqrt(3.0))


def side_direction(f, e) -> float:
    """Polar angle, in the face chart, of the midpoint of side e."""
    order = ORIENTED_FACES[face(f)]
    u, v = edge(e)
    ku, kv = order.index(u), order.index(v)
    k = ku if (ku + 1) % 3 == kv else kv
    return 2.0 * math.pi * k / 3.0 + math.pi / 3.0


@dataclass(frozen=True)
class TetraMetric:
    alpha: float
    a: float

    @classmethod
    def from_alpha(cls, alpha: float) -> "TetraMetric":
        return cls(float(alpha), edge_length(alpha))

    def vertex_cone_angle(self) -> float:
        """Total angle around a vertex: three faces of angle alpha."""
        return 3.0 * self.alpha

    def residual(self) -> float:
        c = math.cos(self.alpha)
        return math.cosh(self.a) * (1.0 - c) - c


def vertex_cone_angle(metric: TetraMetric) -> float:
    return metric.vertex_cone_angle()


@dataclass(frozen=True)
class FaceChart:
    """A face placed in the plane: centered at the origin, first vertex on the positive x-axis.

    Vertices run counterclockwise in the face's oriented order.
    """

    face: Face
    points: dict

    def __getitem__(self, v: int) -> PlanePoint:
        return self.points[v]

    def edge_point(self, e, t: float) -> PlanePoint:
        """Point at arclength fraction t along edge e, measured from its lower label."""
        lo, hi = edge(e)
        return point_along(self.points[lo], self.points[hi], t)

    @property
    def triangle(self) -> tuple[PlanePoint, PlanePoint, PlanePoint]:
        return tuple(self.points[v] for v in ORIENTED_FACES[self.face])


@lru_cache(maxsize=256)
def _chart(alpha: float, f: Face) -> FaceChart:
    r = circumradius(alpha)
    order = ORIENTED_FACES[f]
    pts = {v: from_polar(r, 2.0 * math.pi * k / 3.0) for k, v in enumerate(order)}
    return FaceChart(f, pts)


def face_chart(metric: TetraMetric, f) -> FaceChart:
    return _chart(metric.alpha, face(f))
