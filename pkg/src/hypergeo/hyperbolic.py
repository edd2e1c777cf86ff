"""Hyperbolic plane arithmetic in the hyperboloid model.

Points live on the upper sheet of <p, p> = -1 in Minkowski space with the
form <u, v> = u_x v_x + u_y v_y - u_z v_z.  Isometries are 3x3 matrices
preserving that form.  Beltrami-Klein coordinates (x/z, y/z) are used only
for I/O and for reasoning about straight chords.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ClassificationAmbiguousError, DegenerateInputError, DomainError

J = np.diag([1.0, 1.0, -1.0])

ALGEBRAIC_TOL = 1e-12
ISOMETRY_TOL = 1e-10
CLASSIFY_TOL = 1e-9


def mdot(u, v) -> float:
    """Minkowski product of two 3-vectors."""
    return float(u[0] * v[0] + u[1] * v[1] - u[2] * v[2])


@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float
    z: float

    @classmethod
    def from_vector(cls, v) -> "PlanePoint":
        """Rescale a timelike vector onto the upper sheet."""
        v = np.asarray(v, dtype=float)
        q = -mdot(v, v)
        if q <= 0:
            raise DomainError("vector is not timelike")
        v = v / math.sqrt(q)
        if v[2] < 0:
            v = -v
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def klein(self) -> tuple[float, float]:
        return self.x / self.z, self.y / self.z

    def is_valid(self, tol: float = ALGEBRAIC_TOL) -> bool:
        return self.z >= 1.0 - tol and abs(mdot(self.vec, self.vec) + 1.0) <= tol * max(1.0, self.z**2)


ORIGIN = PlanePoint(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class GeodesicLine:
    """The line {p : <p, pole> = 0} for a unit spacelike pole."""

    px: float
    py: float
    pz: float

    @classmethod
    def from_pole(cls, n) -> "GeodesicLine":
        n = np.asarray(n, dtype=float)
        q = mdot(n, n)
        if q <= 0:
            raise DomainError("pole is not spacelike")
        n = n / math.sqrt(q)
        return cls(float(n[0]), float(n[1]), float(n[2]))

    @property
    def pole(self) -> np.ndarray:
        return np.array([self.px, self.py, self.pz])

    def klein_chord(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """Endpoints of the line on the unit circle, in Klein coordinates."""
        a, b, c = self.px, self.py, self.pz
        # chord: a*x + b*y = c, intersected with x^2 + y^2 = 1
        r2 = a * a + b * b
        foot = np.array([a * c / r2, b * c / r2])
        half = math.sqrt(max(0.0, 1.0 - c * c / r2))
        d = np.array([-b, a]) / math.sqrt(r2)
        p, q = foot - half * d, foot + half * d
        return (float(p[0]), float(p[1])), (float(q[0]), float(q[1]))


class PlaneIsometry:
    """A Minkowski-orthogonal 3x3 matrix acting on the hyperboloid."""

    __slots__ = ("m",)

    def __init__(self, m):
        m = np.array(m, dtype=float)
        if m.shape != (3, 3):
            raise ValueError("isometry matrix must be 3x3")
        m.flags.writeable = False
        self.m = m

    @classmethod
    def identity(cls) -> "PlaneIsometry":
        return cls(np.eye(3))

    def __call__(self, p: PlanePoint) -> PlanePoint:
        return PlanePoint.from_vector(self.m @ p.vec)

    def apply_line(self, line: GeodesicLine) -> GeodesicLine:
        return GeodesicLine.from_pole(self.m @ line.pole)

    def __matmul__(self, other: "PlaneIsometry") -> "PlaneIsometry":
        return compose(self, other)

    def inverse(self) -> "PlaneIsometry":
        return PlaneIsometry(J @ self.m.T @ J)

    def drift(self) -> float:
        return float(np.max(np.abs(self.m.T @ J @ self.m - J)))

    def relative_drift(self) -> float:
        """Drift scaled by the squared entry size; round-off alone keeps this near machine epsilon."""
        return self.drift() / max(1.0, float(np.max(np.abs(self.m))) ** 2)

    def det(self) -> float:
        return float(np.linalg.det(self.m))

    def is_valid(self, tol: float = ISOMETRY_TOL) -> bool:
        return self.drift() <= tol and self.m[2, 2] > 0 and abs(abs(self.det()) - 1.0) <= tol

    def __repr__(self) -> str:
        return f"PlaneIsometry({self.m.tolist()!r})"


@dataclass(frozen=True)
class IsometryClass:
    kind: str
    axis: Optional[GeodesicLine] = None
    translation_length: Optional[float] = None
    # ideal endpoints of the axis (null vectors, positive time component)
    attracting: Optional[tuple[float, float, float]] = None
    repelling: Optional[tuple[float, float, float]] = None

    def axis_position(self, p: PlanePoint) -> float:
        """Signed coordinate of the foot of p along the axis, increasing in the translation direction."""
        if self.kind != "hyperbolic":
            raise DomainError("only hyperbolic isometries have an axis")
        plus = mdot(p.vec, self.attracting)
        minus = mdot(p.vec, self.repelling)
        return 0.5 * math.log(minus / plus)


def lift_from_klein(kx: float, ky: float) -> PlanePoint:
    r2 = kx * kx + ky * ky
    if r2 >= 1.0:
        raise DomainError(f"Klein point ({kx}, {ky}) is not inside the unit disk")
    z = 1.0 / math.sqrt(1.0 - r2)
    return PlanePoint(kx * z, ky * z, z)


def from_polar(r: float, theta: float) -> PlanePoint:
    """Point at hyperbolic distance r from the origin in direction theta."""
    s = math.sinh(r)
    return PlanePoint(s * math.cos(theta), s * math.sin(theta), math.cosh(r))


def distance(p: PlanePoint, q: PlanePoint) -> float:
    # 2 arsinh(|p - q| / 2) equals arcosh(-<p, q>) but keeps precision for close points
    d = p.vec - q.vec
    return 2.0 * math.asinh(0.5 * math.sqrt(max(0.0, mdot(d, d))))


def boost(p: PlanePoint) -> PlaneIsometry:
    """The pure translation carrying the origin to p."""
    x, y, z = p.x, p.y, p.z
    k = 1.0 / (z + 1.0)
    return PlaneIsometry(
        [
            [1.0 + x * x * k, x * y * k, x],
            [x * y * k, 1.0 + y * y * k, y],
            [x, y, z],
        ]
    )


def _planar_rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _local(p: PlanePoint, q: PlanePoint) -> np.ndarray:
    """q expressed in the frame where p sits at the origin."""
    return boost(p).inverse().m @ q.vec


def direction_at(p: PlanePoint, q: PlanePoint) -> float:
    """Angle of the tangent direction from p toward q, measured in p's boosted frame."""
    v = _local(p, q)
    if math.hypot(v[0], v[1]) < 1e-300:
        raise DegenerateInputError("coincident points have no direction")
    return math.atan2(v[1], v[0])


def frame(p: PlanePoint, q: PlanePoint) -> PlaneIsometry:
    """Orientation-preserving isometry taking the origin to p and the positive x-axis toward q."""
    if distance(p, q) < ALGEBRAIC_TOL:
        raise DegenerateInputError("frame needs two distinct points")
    b = boost(p)
    return compose(b, PlaneIsometry(_planar_rotation(direction_at(p, q))))


def line_through(p: PlanePoint, q: PlanePoint) -> GeodesicLine:
    if distance(p, q) < ALGEBRAIC_TOL:
        raise DegenerateInputError("line_through needs two distinct points")
    theta = direction_at(p, q)
    local_pole = np.array([-math.sin(theta), math.cos(theta), 0.0])
    return GeodesicLine.from_pole(boost(p).m @ local_pole)


def distance_to_line(p: PlanePoint, line: GeodesicLine) -> float:
    return math.asinh(abs(mdot(p.vec, line.pole)))


def signed_offset(p: PlanePoint, line: GeodesicLine) -> float:
    """sinh of the signed distance from the line; the sign tells the side."""
    return mdot(p.vec, line.pole)


def foot_on_line(p: PlanePoint, line: GeodesicLine) -> PlanePoint:
    n = line.pole
    return PlanePoint.from_vector(p.vec - mdot(p.vec, n) * n)


def parallelism_distance(beta: float) -> float:
    """Distance from the disk center to a chord whose half central angle is beta."""
    if not 0.0 < beta <= math.pi / 2:
        raise DomainError(f"beta={beta} outside (0, pi/2]")
    return math.log(1.0 / math.tan(beta / 2.0))


def angle_at(p: PlanePoint, q: PlanePoint, r: PlanePoint) -> float:
    """The angle at p between the geodesics toward q and toward r, in [0, pi]."""
    if distance(p, q) < ALGEBRAIC_TOL or distance(p, r) < ALGEBRAIC_TOL:
        raise DegenerateInputError("angle_at needs q and r distinct from p")
    inv = boost(p).inverse().m
    u = inv @ q.vec
    v = inv @ r.vec
    cross = u[0] * v[1] - u[1] * v[0]
    dot = u[0] * v[0] + u[1] * v[1]
    return math.atan2(abs(cross), dot)


def point_along(p: PlanePoint, q: PlanePoint, s: float) -> PlanePoint:
    """The point at arclength fraction s along the geodesic segment from p to q."""
    d = distance(p, q)
    if d < ALGEBRAIC_TOL:
        return p
    v = (math.sinh((1.0 - s) * d) * p.vec + math.sinh(s * d) * q.vec) / math.sinh(d)
    return PlanePoint.from_vector(v)


def segment_crossing(a: PlanePoint, b: PlanePoint, line: GeodesicLine) -> Optional[tuple[float, PlanePoint]]:
    """Where the full geodesic through a, b meets line.

    Returns (s, point) with s the arclength fraction from a (any real number),
    or None when the two lines do not meet inside the plane.
    """
    fa = mdot(a.vec, line.pole)
    fb = mdot(b.vec, line.pole)
    if fa == fb:
        return None
    mu = fa / (fa - fb)
    v = (1.0 - mu) * a.vec + mu * b.vec
    if -mdot(v, v) <= 0 or v[2] <= 0:
        return None
    x = PlanePoint.from_vector(v)
    d = distance(a, b)
    s = distance(a, x) / d
    if mu < 0:
        s = -s
    return s, x


def rotation(center: PlanePoint, theta: float) -> PlaneIsometry:
    """Counterclockwise rotation by theta about center."""
    b = boost(center)
    return compose(compose(b, PlaneIsometry(_planar_rotation(theta))), b.inverse())


def reflection(line: GeodesicLine) -> PlaneIsometry:
    n = line.pole
    return PlaneIsometry(np.eye(3) - 2.0 * np.outer(n, n) @ J)


def renormalize(m: np.ndarray) -> np.ndarray:
    """Gram-Schmidt the columns of m with respect to the Minkowski form."""
    c0, c1, c2 = (m[:, k].copy() for k in range(3))
    c2 /= math.sqrt(-mdot(c2, c2))
    if c2[2] < 0:
        c2 = -c2
    c0 = c0 + mdot(c0, c2) * c2
    c0 /= math.sqrt(mdot(c0, c0))
    c1 = c1 + mdot(c1, c2) * c2 - mdot(c1, c0) * c0
    c1 /= math.sqrt(mdot(c1, c1))
    return np.column_stack([c0, c1, c2])


def compose(g: PlaneIsometry, h: PlaneIsometry) -> PlaneIsometry:
    """g after h; renormalized when round-off pushes it off the isometry group."""
    m = g.m @ h.m
    out = PlaneIsometry(m)
    if out.relative_drift() > ALGEBRAIC_TOL:
        out = PlaneIsometry(renormalize(m))
    return out


def _null_vector(v: np.ndarray) -> tuple[float, float, float]:
    v = np.real(v).astype(float)
    if v[2] < 0:
        v = -v
    v = v / v[2]
    return float(v[0]), float(v[1]), float(v[2])


def classify(g: PlaneIsometry) -> IsometryClass:
    m = g.m
    if np.linalg.det(m) < 0:
        raise DomainError("classify expects an orientation-preserving isometry")
    if np.max(np.abs(m - np.eye(3))) < ISOMETRY_TOL:
        return IsometryClass("identity")
    tr = float(np.trace(m))
    excess = tr - 3.0  # = 4 sinh^2(L/2) for a translation of length L
    if excess > CLASSIFY_TOL:
        length = 2.0 * math.asinh(math.sqrt(excess / 4.0))
        w, vecs = np.linalg.eig(m)
        order = np.argsort(np.abs(w))
        lo, mid, hi = order
        plus = _null_vector(vecs[:, hi])
        minus = _null_vector(vecs[:, lo])
        # pole orthogonal to both ideal endpoints
        pole = J @ np.cross(np.array(minus), np.array(plus))
        return IsometryClass(
            "hyperbolic",
            axis=GeodesicLine.from_pole(pole),
            translation_length=length,
            attracting=plus,
            repelling=minus,
        )
    if excess < -CLASSIFY_TOL:
        return IsometryClass("elliptic")
    if np.max(np.abs(m - np.eye(3))) > 1e-6:
        return IsometryClass("parabolic")
    raise ClassificationAmbiguousError(f"trace {tr!r} too close to 3 to classify")
