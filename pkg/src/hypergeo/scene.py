"""Developed pictures of closed geodesics, as Klein-disk coordinates.

One period of the development is moved so that the middle of the geodesic
sits at the disk center and runs along the x-axis; that keeps the picture
balanced and the far faces as far from the boundary as possible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .development import develop
from .hyperbolic import compose, frame, point_along
from .solver import ClosedGeodesic
from .tetrahedron import label


@dataclass
class Scene:
    triangles: list  # (face label, [(kx, ky)] * 3)
    geodesic: list  # developed crossing points, entry of step 0 first
    midpoints: list  # (edge label, (kx, ky))
    title: str = ""


def scene(g: ClosedGeodesic, title: str = "") -> Scene:
    dev = develop(g.sequence, g.metric)
    n = len(g.sequence)
    k = n // 2  # the middle face is the root, so every placement stays short

    def place(i: int):
        return dev.relative(k, i)

    a, b = g.crossing_point(k - 1, k), g.crossing_point(k, k)
    move = frame(point_along(a, b, 0.5), b).inverse()

    tris = []
    for i in range(n):
        m = compose(move, place(i))
        chart = dev.chart(i)
        tris.append((label(chart.face), [m(chart[v]).klein for v in chart.face]))
    line = [compose(move, place(0))(g.crossing_point(-1, 0)).klein]
    mids = []
    for i, (e, t) in enumerate(g.crossings):
        x = compose(move, place(i))(g.crossing_point(i, i)).klein
        line.append(x)
        if abs(t - 0.5) < 1e-8:
            mids.append((label(e), x))
    return Scene(tris, line, mids, title)
