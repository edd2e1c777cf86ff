"""Self-intersections of geodesics on cones over the hyperbolic and Euclidean planes.

Cut the cone along the ray opposite the geodesic's closest point and unroll
it: the geodesic becomes a straight line at distance d from the apex.  Two
points of the line at the same apex distance are glued together exactly when
their polar angles differ by a multiple of the full angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .hyperbolic import parallelism_distance

INTEGRAL_TOL = 1e-12


@dataclass(frozen=True)
class Cone:
    full_angle: float
    geometry: str = "hyperbolic"

    def __post_init__(self):
        if not self.full_angle > 0:
            raise DomainError(f"full angle must be positive, got {self.full_angle}")
        if self.geometry not in ("hyperbolic", "euclidean"):
            raise DomainError(f"unknown geometry {self.geometry!r}")


@dataclass(frozen=True)
class ConeGeodesicQuery:
    cone: Cone
    d: float

    def __post_init__(self):
        if not self.d >= 0:
            raise DomainError(f"apex distance must be non-negative, got {self.d}")


def n_of(full_angle: float) -> int:
    """Largest m with m * full_angle < pi."""
    if not full_angle > 0:
        raise DomainError("full angle must be positive")
    ratio = math.pi / full_angle
    k = round(ratio)
    if abs(ratio - k) < INTEGRAL_TOL:
        return max(k - 1, 0)
    return math.floor(ratio)


def threshold(m: int, full_angle: float) -> float:
    """Apex distance ln cot(m * full_angle / 4) below which there are at least m self-intersections."""
    half = m * full_angle / 2.0  # the angle of parallelism at this threshold
    return parallelism_distance(half) if half <= math.pi / 2 else 0.0


def thresholds(full_angle: float) -> list:
    return [threshold(m, full_angle) for m in range(1, n_of(full_angle) + 1)]


def count_hyperbolic(q: ConeGeodesicQuery) -> int:
    alpha, d = q.cone.full_angle, q.d
    if alpha >= math.pi:
        return 0
    n = n_of(alpha)
    if n == 0:
        return 0
    if d < threshold(n, alpha):
        return n
    for m in range(n - 1, 0, -1):
        if threshold(m + 1, alpha) <= d < threshold(m, alpha):
            return m
    return 0


def count_euclidean(full_angle: float) -> int:
    return n_of(full_angle)


def count(q: ConeGeodesicQuery) -> int:
    if q.cone.geometry == "euclidean":
        return count_euclidean(q.cone.full_angle)
    return count_hyperbolic(q)


def _opening(q: ConeGeodesicQuery, s: np.ndarray) -> np.ndarray:
    """Polar-angle gap between the line points at arclength +s and -s from the foot."""
    d = q.d
    if q.cone.geometry == "euclidean":
        x, y = np.full_like(s, d), s
    else:
        # hyperboloid point cosh(s) * foot + sinh(s) * unit tangent
        x, y = np.cosh(s) * math.sinh(d), np.sinh(s)
    return 2.0 * np.arctan2(y, x)


def brute_force_count(q: ConeGeodesicQuery, s_max: float = 60.0, samples: int = 20001) -> int:
    """Count glued pairs on the unrolled line by sampling it.

    A pair exists for every multiple k * full_angle (k >= 1) that the sampled
    angle gap actually passes through.  Hyperbolic lines are sampled on a
    grid dense near the foot and reaching far out, where the gap saturates.
    """
    if q.d <= 0:
        raise DomainError("brute force needs a positive apex distance")
    if q.cone.geometry == "euclidean":
        # the gap approaches pi like 2 d / s, so sample much further out
        s = q.d * np.concatenate(([0.0], np.geomspace(1e-6, 1e15, samples)))
    else:
        s = np.concatenate(([0.0], np.geomspace(1e-6, s_max, samples)))
    gap = _opening(q, s)
    alpha = q.cone.full_angle
    found = 0
    k = 1
    while k * alpha < 2.0 * math.pi:
        target = k * alpha
        below = gap < target
        # a sign change of gap - target between neighbouring samples is one glued pair
        if np.any(below[:-1] & ~below[1:]):
            found += 1
        k += 1
    return found


def near_threshold(alpha: float, d: float, margin: float) -> bool:
    return any(abs(d - t) < margin for t in thresholds(alpha))


def sweep(samples: int, seed: int, alpha_range=(0.05, 3.2), d_range=(0.01, 3.0), margin: float = 1e-6) -> list:
    """Seeded random comparison of the closed form against brute force; near-threshold draws are redrawn."""
    rng = np.random.default_rng(seed)
    rows = []
    while len(rows) < samples:
        alpha = float(rng.uniform(*alpha_range))
        d = float(rng.uniform(*d_range))
        if near_threshold(alpha, d, margin):
            continue
        q = ConeGeodesicQuery(Cone(alpha, "hyperbolic"), d)
        closed, brute = count_hyperbolic(q), brute_force_count(q)
        rows.append({"alpha": alpha, "d": d, "n": n_of(alpha), "count_closed_form": closed,
                     "count_brute_force": brute, "agree": closed == brute})
    return rows
