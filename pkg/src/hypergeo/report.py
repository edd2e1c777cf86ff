"""Matplotlib figures for the report command."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .cone import Cone, ConeGeodesicQuery, count_hyperbolic, n_of, thresholds  # noqa: E402
from .scene import Scene  # noqa: E402
from .tetrahedron import theorem2_rhs  # noqa: E402

# fixed metadata keeps PNG bytes stable between runs
_META = {"Software": None}


def development_figure(sc: Scene, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.add_patch(plt.Circle((0, 0), 1.0, fill=False, color="0.5", lw=1))
    for name, tri in sc.triangles:
        xs, ys = zip(*(tri + [tri[0]]))
        ax.fill(xs, ys, color="#eef2f8", ec="#345", lw=0.6)
        cx, cy = sum(xs[:3]) / 3, sum(ys[:3]) / 3
        ax.text(cx, cy, name, fontsize=6, ha="center", va="center", color="#345")
    gx, gy = zip(*sc.geodesic)
    ax.plot(gx, gy, color="#c22", lw=1.4)
    if sc.midpoints:
        mx, my = zip(*(k for _, k in sc.midpoints))
        ax.plot(mx, my, "o", color="#15a", ms=4)
    ax.set_xlim(-1.02, 1.02)
    ax.set_ylim(-1.02, 1.02)
    ax.set_aspect("equal")
    ax.axis("off")
    if sc.title:
        ax.set_title(sc.title)
    fig.savefig(path, dpi=150, bbox_inches="tight", metadata=_META)
    plt.close(fig)


def cone_figure(path, angles=(math.pi / 2, math.pi / 3, 0.5), d_max: float = 3.0) -> None:
    """Self-intersection count against apex distance, with the threshold distances dashed."""
    fig, ax = plt.subplots(figsize=(7, 4))
    d = np.linspace(0.005, d_max, 1200)
    for a in angles:
        counts = [count_hyperbolic(ConeGeodesicQuery(Cone(a), float(x))) for x in d]
        line, = ax.step(d, counts, where="post", label=f"full angle {a:.4g} (n = {n_of(a)})")
        for t in thresholds(a):
            if t < d_max:
                ax.axvline(t, color=line.get_color(), ls=":", lw=0.7)
    ax.set_xlabel("distance from apex")
    ax.set_ylabel("self-intersections")
    ax.legend(fontsize=8)
    fig.savefig(path, dpi=150, bbox_inches="tight", metadata=_META)
    plt.close(fig)


def margin_figure(rows, path) -> None:
    """Vertex-distance margin over the face-angle grid, one curve per class."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for cls in sorted({r["class"] for r in rows}):
        pts = sorted((r["alpha"], math.tanh(r["min_vertex_distance"]) - theorem2_rhs(r["alpha"]))
                     for r in rows if r["class"] == cls)
        ax.plot(*zip(*pts), "o-", ms=3, label=cls)
    ax.axhline(0.0, color="0.3", lw=0.8)
    ax.set_xlabel("face angle")
    ax.set_ylabel("tanh(d) - bound")
    ax.legend(fontsize=8)
    fig.savefig(path, dpi=150, bbox_inches="tight", metadata=_META)
    plt.close(fig)
