import math

import numpy as np
import pytest

from hypergeo.development import (
    CrossingSequence,
    canonical_sequence,
    check_development,
    develop,
    find_relabeling,
    gluing,
    midpoint_anchors,
    validate,
)
from hypergeo.errors import SequenceError
from hypergeo.euclid import half_turn
from hypergeo.hyperbolic import classify, compose, distance, rotation
from hypergeo.tetrahedron import FACES, TetraMetric, edges_of_face, other_face

ALPHAS = (0.1, 0.5, 1.0)


def test_canonical_valid():
    for cls in ("G2", "G3", "G32"):
        assert validate(canonical_sequence(cls))


def test_backtracking_rejected():
    seq = CrossingSequence((((1, 2, 3), (1, 2)), ((1, 2, 4), (1, 2))), cyclic=True)
    report = validate(seq)
    assert not report
    assert report.index is not None
    assert "entry" in report.message


def test_empty_rejected():
    report = validate(CrossingSequence((), cyclic=True))
    assert not report and report.message == "empty"


def test_wrong_neighbour_rejected():
    seq = CrossingSequence((((1, 2, 3), (1, 2)), ((1, 3, 4), (1, 3))), cyclic=False)
    assert validate(seq).index == 1


def test_develop_rejects_invalid():
    with pytest.raises(SequenceError):
        develop(CrossingSequence((), cyclic=True), TetraMetric.from_alpha(0.5))


def test_single_face():
    dev = develop(CrossingSequence((((1, 2, 3), (1, 2)),), cyclic=False), TetraMetric.from_alpha(0.5))
    assert len(dev) == 1
    assert np.allclose(dev.placements[0].m, np.eye(3))
    assert dev.holonomy is None


def test_two_faces_share_edge():
    m = TetraMetric.from_alpha(0.5)
    seq = CrossingSequence((((1, 2, 3), (1, 2)), ((1, 2, 4), (1, 4))), cyclic=False)
    dev = develop(seq, m)
    for v in (1, 2):
        assert distance(dev.vertex(0, v), dev.vertex(1, v)) < 1e-10
    assert distance(dev.vertex(0, 3), dev.vertex(1, 4)) > 0.1
    assert check_development(dev) == []


@pytest.mark.parametrize("alpha", ALPHAS)
def test_gluing_involution(alpha):
    m = TetraMetric.from_alpha(alpha)
    for f in FACES:
        for e in edges_of_face(f):
            g = compose(gluing(m, f, e), gluing(m, other_face(e, f), e))
            assert np.allclose(g.m, np.eye(3), atol=1e-10)


def test_canonical_shapes():
    g2, g3, g32 = (canonical_sequence(c) for c in ("G2", "G3", "G32"))
    assert len(g2) == 4 and sorted(g2.faces) == sorted(FACES)
    assert len(g3) == 8
    counts = {e: g3.crossings.count(e) for e in set(g3.crossings)}
    assert counts[(1, 4)] == 2 and counts[(2, 3)] == 2
    for e in ((1, 2), (1, 3), (3, 4), (2, 4)):
        assert counts[e] == 1
    assert len(g32) == 12


@pytest.mark.parametrize("cls", ["G2", "G3", "G32"])
@pytest.mark.parametrize("alpha", ALPHAS)
def test_development_sound(cls, alpha):
    dev = develop(canonical_sequence(cls), TetraMetric.from_alpha(alpha))
    assert check_development(dev, tol=1e-10) == []
    assert classify(dev.holonomy).kind == "hyperbolic"


def test_g2_holonomy_hyperbolic():
    dev = develop(canonical_sequence("G2"), TetraMetric.from_alpha(0.5))
    assert classify(dev.holonomy).kind == "hyperbolic"


@pytest.mark.parametrize("cls", ["G2", "G3", "G32"])
def test_holonomy_conjugation(cls):
    m = TetraMetric.from_alpha(0.5)
    seq = canonical_sequence(cls)
    base = classify(develop(seq, m).holonomy).translation_length
    for k in range(len(seq)):
        other = classify(develop(seq.rotate(k), m).holonomy).translation_length
        assert other == pytest.approx(base, abs=1e-9)


@pytest.mark.parametrize("cls", ["G2", "G3", "G32"])
@pytest.mark.parametrize("alpha", ALPHAS)
def test_quarter_symmetry(cls, alpha):
    # the half-turn about the midpoint at each anchor swaps the quarters on either side of it
    m = TetraMetric.from_alpha(alpha)
    seq = canonical_sequence(cls)
    dev = develop(seq, m)
    quarter = len(seq) // 4
    for b in midpoint_anchors(cls):
        e = seq.steps[b][1]
        turn = rotation(dev.chart(b).edge_point(e, 0.5), math.pi)
        perm = half_turn(e)
        for k in range(quarter):
            i, j = b - k, b + 1 + k
            assert tuple(sorted(perm[v] for v in dev.face_of(i))) == dev.face_of(j)
            before = compose(turn, dev.relative(b, i))
            after = dev.relative(b, j)
            for v in dev.face_of(i):
                assert distance(before(dev.chart(i)[v]), after(dev.chart(j)[perm[v]])) < 1e-9


def test_tokens_round_trip():
    seq = canonical_sequence("G3")
    assert CrossingSequence.from_tokens(seq.to_tokens()) == seq


def test_token_errors_carry_index():
    with pytest.raises(SequenceError) as info:
        CrossingSequence.from_tokens("12:123,1x:134")
    assert info.value.index == 1


def test_find_relabeling():
    seq = canonical_sequence("G3")
    perm = {1: 2, 2: 3, 3: 1, 4: 4}
    target = seq.relabel(perm).rotate(3)
    found = find_relabeling(seq, target)
    assert found is not None
    p, k, rev = found
    assert not rev
    assert seq.relabel(p).rotate(k) == target
    assert find_relabeling(seq, canonical_sequence("G2")) is None
