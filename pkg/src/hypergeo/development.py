"""Unfolding chains of tetrahedron faces into the hyperbolic plane.

A crossing sequence lists, step by step, the face the geodesic is on and the
edge through which it leaves that face.  Developing the sequence chains the
edge-gluing isometries; for a cyclic sequence the placement of the repeated
first face is the holonomy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import SequenceError
from .hyperbolic import (
    PlaneIsometry,
    PlanePoint,
    compose,
    distance,
    line_through,
    signed_offset,
)
from .tetrahedron import (
    Edge,
    Face,
    TetraMetric,
    apex,
    common_face,
    inradius,
    side_direction,
    edge,
    face,
    face_chart,
    label,
    other_face,
)

Step = tuple[Face, Edge]


@dataclass(frozen=True)
class CrossingSequence:
    steps: tuple
    cyclic: bool = True

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple((face(f), edge(e)) for f, e in self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def crossings(self) -> tuple[Edge, ...]:
        """Exit edges in order; crossing i is where step i leaves its face."""
        return tuple(e for _, e in self.steps)

    @property
    def faces(self) -> tuple[Face, ...]:
        return tuple(f for f, _ in self.steps)

    @classmethod
    def from_crossings(cls, crossings, cyclic: bool = True, first_face=None) -> "CrossingSequence":
        """Build a sequence from its edge-crossing order alone.

        Face i is the face shared by crossings i-1 and i.  A non-cyclic
        sequence needs ``first_face`` for its opening step.
        """
        es = [edge(e) for e in crossings]
        if not es:
            return cls((), cyclic)
        steps = []
        for i, e in enumerate(es):
            if i == 0:
                if cyclic:
                    f = common_face(es[-1], e)
                else:
                    f = face(first_face)
            else:
                f = common_face(es[i - 1], e)
            if f is None:
                raise SequenceError(f"crossings {label(es[i - 1])} and {label(e)} share no face", i)
            steps.append((f, e))
        return cls(tuple(steps), cyclic)

    @classmethod
    def from_tokens(cls, text: str) -> "CrossingSequence":
        """Parse "12:124,14:134,..." -- each token is a crossed edge and the face entered.

        The sequence is cyclic: the face entered after the last token is the
        one left through the first token's edge.
        """
        tokens = [t.strip() for t in text.split(",") if t.strip()]
        if not tokens:
            raise SequenceError("empty sequence", 0)
        es, fs = [], []
        for i, tok in enumerate(tokens):
            try:
                e_txt, f_txt = tok.split(":")
                es.append(edge(e_txt))
                fs.append(face(f_txt))
            except ValueError as exc:
                raise SequenceError(f"bad token {tok!r}: {exc}", i) from None
        n = len(es)
        steps = tuple((fs[i - 1], es[i]) for i in range(n))
        return cls(steps, True)

    def to_tokens(self) -> str:
        n = len(self.steps)
        return ",".join(f"{label(self.steps[i][1])}:{label(self.steps[(i + 1) % n][0])}" for i in range(n))

    def relabel(self, perm: dict) -> "CrossingSequence":
        steps = tuple((face(perm[v] for v in f), edge(perm[v] for v in e)) for f, e in self.steps)
        return CrossingSequence(steps, self.cyclic)

    def rotate(self, k: int) -> "CrossingSequence":
        k %= len(self.steps)
        return CrossingSequence(self.steps[k:] + self.steps[:k], self.cyclic)

    def reversed(self) -> "CrossingSequence":
        if not self.cyclic:
            raise SequenceError("only cyclic sequences can be reversed")
        return CrossingSequence.from_crossings(self.crossings[::-1], cyclic=True)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    index: Optional[int] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate(seq: CrossingSequence) -> ValidationReport:
    n = len(seq.steps)
    if n == 0:
        return ValidationReport(False, 0, "empty")
    for i, (f, e) in enumerate(seq.steps):
        if not set(e) <= set(f):
            return ValidationReport(False, i, f"exit edge {label(e)} is not on face {label(f)}")
        if i + 1 < n or seq.cyclic:
            nf = seq.steps[(i + 1) % n][0]
            if nf != other_face(e, f):
                return ValidationReport(
                    False, (i + 1) % n, f"face {label(nf)} is not across edge {label(e)} from {label(f)}"
                )
        if i > 0 or seq.cyclic:
            entry = seq.steps[i - 1][1]
            if entry == e:
                return ValidationReport(False, i, f"step re-exits through its entry edge {label(e)}")
    return ValidationReport(True)


def _rot(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _shift(d: float) -> np.ndarray:
    c, s = math.cosh(d), math.sinh(d)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [s, 0.0, c]])


@lru_cache(maxsize=1024)
def _gluing(alpha: float, f: Face, e: Edge) -> PlaneIsometry:
    # Turn the neighbour's side e to face -x, push its center out by twice the
    # inradius, then turn to side e's direction in f.  Built from exact
    # rotations and one translation so the product stays on the group.
    nf = other_face(e, f)
    m = _rot(side_direction(f, e)) @ _shift(2.0 * inradius(alpha)) @ _rot(math.pi - side_direction(nf, e))
    return PlaneIsometry(m)


def gluing(metric: TetraMetric, f, e) -> PlaneIsometry:
    """Map from the chart of the face across edge e into the chart of face f."""
    return _gluing(metric.alpha, face(f), edge(e))


@dataclass
class Development:
    """A sequence unfolded into the plane, rooted at the chart of step 0.

    Global placements lose accuracy like eps * exp(2D) for faces at distance D
    from the root, so precise work goes through :meth:`relative`, which
    multiplies the gluings between two steps directly.
    """

    sequence: CrossingSequence
    metric: TetraMetric
    placements: list
    holonomy: Optional[PlaneIsometry] = None
    developed_edges: list = field(default_factory=list)
    gluings: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.placements)

    def placement(self, i: int) -> PlaneIsometry:
        """Placement of step i; indices outside one period use holonomy powers."""
        n = len(self.placements)
        if 0 <= i < n:
            return self.placements[i]
        if self.holonomy is None:
            raise IndexError(i)
        k, r = divmod(i, n)
        g = self.holonomy if k > 0 else self.holonomy.inverse()
        out = self.placements[r]
        for _ in range(abs(k)):
            out = compose(g, out)
        return out

    def relative(self, i: int, j: int) -> PlaneIsometry:
        """Map from the chart of step j into the chart of step i (i <= j)."""
        if j < i:
            return self.relative(j, i).inverse()
        n = len(self.gluings)
        if not self.sequence.cyclic and (i < 0 or j > n):
            raise IndexError((i, j))
        out = PlaneIsometry.identity()
        for k in range(i, j):
            out = compose(out, self.gluings[k % n])
        return out

    def holonomy_at(self, i: int) -> PlaneIsometry:
        """Holonomy of the period based at the face of step i."""
        if not self.sequence.cyclic:
            raise ValueError("non-cyclic developments have no holonomy")
        return self.relative(i, i + len(self.gluings))

    def face_of(self, i: int) -> Face:
        return self.sequence.steps[i % len(self.sequence.steps)][0]

    def exit_of(self, i: int) -> Edge:
        return self.sequence.steps[i % len(self.sequence.steps)][1]

    def entry_of(self, i: int) -> Edge:
        return self.sequence.steps[(i - 1) % len(self.sequence.steps)][1]

    def chart(self, i: int):
        return face_chart(self.metric, self.face_of(i))

    def vertex(self, i: int, v: int) -> PlanePoint:
        """Developed position of vertex v of the face at step i."""
        return self.placement(i)(self.chart(i)[v])

    def exit_segment(self, i: int) -> tuple[PlanePoint, PlanePoint]:
        """Developed endpoints of the exit edge of step i, lower label first."""
        lo, hi = self.exit_of(i)
        return self.vertex(i, lo), self.vertex(i, hi)

    def triangle(self, i: int) -> dict:
        return {v: self.vertex(i, v) for v in self.face_of(i)}


def develop(seq: CrossingSequence, metric: TetraMetric) -> Development:
    report = validate(seq)
    if not report:
        raise SequenceError(report.message, report.index)
    gluings = [gluing(metric, f, e) for f, e in seq.steps]
    n = len(gluings)
    if not seq.cyclic:
        gluings = gluings[:-1]
    placements = [PlaneIsometry.identity()]
    for k in range(n - 1):
        placements.append(compose(placements[-1], gluings[k]))
    holonomy = compose(placements[-1], gluings[-1]) if seq.cyclic else None
    dev = Development(seq, metric, placements, holonomy, gluings=gluings)
    dev.developed_edges = [dev.exit_segment(i) for i in range(n)]
    return dev


def check_development(dev: Development, tol: float = 1e-10) -> list:
    """Problems with shared-edge matching or folding; empty when the development is sound.

    Each consecutive pair is compared in the chart of the earlier step.
    """
    problems = []
    n = len(dev.sequence.steps)
    last = n if dev.sequence.cyclic else n - 1
    for i in range(last):
        lo, hi = dev.exit_of(i)
        here, there = dev.chart(i), dev.chart(i + 1)
        step = dev.relative(i, i + 1)
        mismatch = max(distance(here[v], step(there[v])) for v in (lo, hi))
        if mismatch > tol:
            problems.append((i, "edge-mismatch", mismatch))
        line = line_through(here[lo], here[hi])
        s1 = signed_offset(here[apex(dev.face_of(i), (lo, hi))], line)
        s2 = signed_offset(step(there[apex(dev.face_of(i + 1), (lo, hi))]), line)
        if s1 * s2 >= 0:
            problems.append((i, "fold-back", s1 * s2))
    return problems


CANONICAL = {
    "G2": ((12, 13, 34, 24), (0, 1, 2, 3)),
    "G3": ((12, 14, 13, 23, 34, 14, 24, 23), (0, 2, 4, 6)),
    "G32": ((12, 24, 23, 13, 14, 24, 34, 13, 23, 24, 14, 13), (0, 3, 6, 9)),
}


def _class_key(cls: str) -> str:
    key = cls.upper()
    if key not in CANONICAL:
        raise KeyError(f"unknown geodesic class {cls!r}; expected one of {sorted(CANONICAL)}")
    return key


def canonical_sequence(cls: str) -> CrossingSequence:
    crossings, _ = CANONICAL[_class_key(cls)]
    return CrossingSequence.from_crossings([str(c) for c in crossings], cyclic=True)


def midpoint_anchors(cls: str) -> tuple[int, ...]:
    """Indices of the crossings that carry edge midpoints in the canonical class."""
    return CANONICAL[_class_key(cls)][1]


def find_relabeling(seq: CrossingSequence, target: CrossingSequence, allow_reverse: bool = True):
    """Search vertex permutations, cyclic shifts and reversal carrying seq onto target.

    Returns (perm, shift, reversed) with target == relabel(rotate(seq', shift)),
    where seq' is seq or its reversal; None if no match exists.
    """
    import itertools

    if len(seq) != len(target):
        return None
    candidates = [(seq, False)]
    if allow_reverse:
        candidates.append((seq.reversed(), True))
    for s, rev in candidates:
        for perm_tuple in itertools.permutations((1, 2, 3, 4)):
            perm = dict(zip((1, 2, 3, 4), perm_tuple))
            relabeled = s.relabel(perm)
            for k in range(len(s)):
                if relabeled.rotate(k).steps == target.steps:
                    return perm, k, rev
    return None
