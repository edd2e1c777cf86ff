"""Plain SVG 1.1 rendering of a developed closed geodesic in the Klein disk."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .scene import Scene

SIZE = 1000.0
RADIUS = 480.0


def to_view(k) -> tuple[float, float]:
    """Klein coordinates to viewbox coordinates (y grows downward in SVG)."""
    return SIZE / 2 + RADIUS * k[0], SIZE / 2 - RADIUS * k[1]


def from_view(x: float, y: float) -> tuple[float, float]:
    return (x - SIZE / 2) / RADIUS, (SIZE / 2 - y) / RADIUS


def _pts(ks) -> str:
    return " ".join("%.6f,%.6f" % to_view(k) for k in ks)


def render(sc: Scene) -> str:
    c = SIZE / 2
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE:g}" height="{SIZE:g}" '
        f'viewBox="0 0 {SIZE:g} {SIZE:g}">',
    ]
    if sc.title:
        out.append(f"<title>{escape(sc.title)}</title>")
    out.append(f'<circle cx="{c:g}" cy="{c:g}" r="{RADIUS:g}" fill="none" stroke="#888" stroke-width="1.5"/>')
    out.append('<g id="faces" fill="#eef2f8" stroke="#345" stroke-width="0.8">')
    for name, tri in sc.triangles:
        out.append(f'<polygon data-face="{name}" points="{_pts(tri)}"/>')
    out.append("</g>")
    out.append(f'<polyline id="geodesic" fill="none" stroke="#c22" stroke-width="1.6" points="{_pts(sc.geodesic)}"/>')
    out.append('<g id="midpoints" fill="#15a">')
    for name, k in sc.midpoints:
        x, y = to_view(k)
        out.append(f'<circle data-edge="{name}" cx="{x:.6f}" cy="{y:.6f}" r="4"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write(sc: Scene, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render(sc))
