import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.optimize import brentq

from hypergeo.errors import ClassificationAmbiguousError, DegenerateInputError, DomainError
from hypergeo.hyperbolic import (
    ORIGIN,
    GeodesicLine,
    PlaneIsometry,
    angle_at,
    classify,
    compose,
    distance,
    distance_to_line,
    from_polar,
    lift_from_klein,
    line_through,
    mdot,
    parallelism_distance,
    point_along,
    reflection,
    rotation,
)

disk = st.tuples(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9)).filter(lambda k: k[0] ** 2 + k[1] ** 2 < 0.81)


def test_lift_origin():
    p = lift_from_klein(0.0, 0.0)
    assert (p.x, p.y, p.z) == (0.0, 0.0, 1.0)


def test_lift_round_trip():
    p = lift_from_klein(0.5, 0.0)
    assert p.klein == pytest.approx((0.5, 0.0), abs=1e-12)
    assert p.y == 0.0


@given(disk)
def test_lift_on_hyperboloid(k):
    p = lift_from_klein(*k)
    assert mdot(p.vec, p.vec) == pytest.approx(-1.0, abs=1e-12)
    assert p.z >= 1.0
    assert p.klein == pytest.approx(k, abs=1e-12)


def test_lift_outside_disk():
    with pytest.raises(DomainError):
        lift_from_klein(0.8, 0.6)


def test_distance_zero():
    p = lift_from_klein(0.3, -0.2)
    assert distance(p, p) == 0.0


@pytest.mark.parametrize("r", [0.1, 0.5, 0.9, 0.99])
def test_radial_distance_matches_metric_integral(r):
    # the Klein metric along a radius is dr / (1 - r^2)
    integral, _ = quad(lambda s: 1.0 / (1.0 - s * s), 0.0, r)
    assert distance(ORIGIN, lift_from_klein(r, 0.0)) == pytest.approx(integral, abs=1e-12)
    assert distance(ORIGIN, lift_from_klein(r, 0.0)) == pytest.approx(math.atanh(r), abs=1e-12)


@settings(max_examples=200)
@given(disk, disk, disk)
def test_triangle_inequality(a, b, c):
    p, q, r = (lift_from_klein(*k) for k in (a, b, c))
    assert distance(p, r) <= distance(p, q) + distance(q, r) + 1e-12
    assert distance(p, q) == pytest.approx(distance(q, p), abs=1e-14)


def test_line_through_x_axis():
    line = line_through(ORIGIN, lift_from_klein(0.5, 0.0))
    n = line.pole
    assert abs(n[0]) < 1e-15 and abs(n[2]) < 1e-15
    assert abs(n[1]) == pytest.approx(1.0)


@given(disk, disk)
def test_line_through_incidence(a, b):
    p, q = lift_from_klein(*a), lift_from_klein(*b)
    if distance(p, q) < 1e-6:
        return
    line = line_through(p, q)
    assert abs(mdot(p.vec, line.pole)) < 1e-10
    assert abs(mdot(q.vec, line.pole)) < 1e-10
    assert mdot(line.pole, line.pole) == pytest.approx(1.0, abs=1e-12)
    back = line_through(q, p)
    assert np.allclose(np.abs(back.pole), np.abs(line.pole), atol=1e-10)


def test_line_through_degenerate():
    p = lift_from_klein(0.1, 0.1)
    with pytest.raises(DegenerateInputError):
        line_through(p, p)


def test_distance_to_line_on_line():
    line = line_through(ORIGIN, lift_from_klein(0.5, 0.2))
    assert distance_to_line(point_along(ORIGIN, lift_from_klein(0.5, 0.2), 0.3), line) < 1e-14


@pytest.mark.parametrize("c", [0.1, 0.4, 0.8])
def test_distance_to_vertical_chord(c):
    chord = line_through(lift_from_klein(c, -0.3), lift_from_klein(c, 0.3))
    assert distance_to_line(ORIGIN, chord) == pytest.approx(math.atanh(c), abs=1e-12)


def test_distance_to_line_brute_force():
    rng = np.random.default_rng(5)
    for _ in range(10):
        a, b, p = (lift_from_klein(*(0.6 * rng.uniform(-1, 1, 2))) for _ in range(3))
        line = line_through(a, b)
        samples = np.linspace(-8, 8, 40001)
        d_ab = distance(a, b)
        best = min(distance(p, point_along(a, b, s / d_ab)) for s in samples[::40])
        # refine around the coarse minimum
        s0 = samples[::40][int(np.argmin([distance(p, point_along(a, b, s / d_ab)) for s in samples[::40]]))]
        fine = np.linspace(s0 - 0.02, s0 + 0.02, 4001)
        best = min(best, min(distance(p, point_along(a, b, s / d_ab)) for s in fine))
        assert distance_to_line(p, line) == pytest.approx(best, abs=1e-9)


def test_parallelism_right_angle():
    assert parallelism_distance(math.pi / 2) == pytest.approx(0.0, abs=1e-15)


def test_parallelism_quarter():
    assert parallelism_distance(math.pi / 4) == pytest.approx(math.log(1 + math.sqrt(2)), abs=1e-12)
    assert parallelism_distance(math.pi / 4) == pytest.approx(0.881373587019543, abs=1e-12)


@given(st.floats(1e-6, math.pi / 2 - 1e-6))
def test_parallelism_equals_chord_distance(beta):
    # a chord subtending central angle 2 beta sits at Klein distance cos(beta) from the center;
    # atanh(cos) is ill-conditioned near 0 in doubles, so evaluate it with 50 digits
    with mpmath.workdps(50):
        oracle = float(mpmath.atanh(mpmath.cos(mpmath.mpf(beta))))
    assert parallelism_distance(beta) == pytest.approx(oracle, abs=1e-12)


def test_parallelism_diverges_monotonically():
    values = [parallelism_distance(10.0 ** -k) for k in range(1, 12)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] > 20


@pytest.mark.parametrize("beta", [0.0, -0.1, 2.0])
def test_parallelism_domain(beta):
    with pytest.raises(DomainError):
        parallelism_distance(beta)


def test_angle_collinear_and_equal():
    q, r = lift_from_klein(-0.4, 0.0), lift_from_klein(0.6, 0.0)
    assert angle_at(ORIGIN, q, r) == pytest.approx(math.pi, abs=1e-14)
    assert angle_at(ORIGIN, r, r) == pytest.approx(0.0, abs=1e-14)


def test_angle_degenerate():
    with pytest.raises(DegenerateInputError):
        angle_at(ORIGIN, ORIGIN, lift_from_klein(0.1, 0.0))


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.9])
def test_equilateral_angles(alpha):
    # side from the law of cosines, then an equilateral triangle built by root finding on the third side
    a = math.acosh(math.cos(alpha) / (1 - math.cos(alpha)))
    q = from_polar(a, 0.0)
    theta = brentq(lambda t: distance(q, from_polar(a, t)) - a, 1e-6, math.pi - 1e-6, xtol=1e-15)
    r = from_polar(a, theta)
    for p, x, y in ((ORIGIN, q, r), (q, r, ORIGIN), (r, ORIGIN, q)):
        assert angle_at(p, x, y) == pytest.approx(alpha, abs=1e-10)


def test_rotation_identities():
    c = lift_from_klein(0.3, -0.1)
    assert np.allclose(rotation(c, 0.0).m, np.eye(3), atol=1e-12)
    half = rotation(c, math.pi)
    assert np.allclose(compose(half, half).m, np.eye(3), atol=1e-10)
    line = line_through(c, ORIGIN)
    refl = reflection(line)
    assert np.allclose(compose(refl, refl).m, np.eye(3), atol=1e-10)


@settings(max_examples=100)
@given(disk, st.floats(-math.pi, math.pi), disk, disk)
def test_isometries_preserve_distance(c, theta, a, b):
    g = rotation(lift_from_klein(*c), theta)
    p, q = lift_from_klein(*a), lift_from_klein(*b)
    assert distance(g(p), g(q)) == pytest.approx(distance(p, q), abs=1e-10)
    assert g.is_valid()


def test_isometry_inverse():
    g = compose(rotation(lift_from_klein(0.2, 0.1), 0.7), rotation(lift_from_klein(-0.4, 0.3), 1.9))
    assert np.allclose((g @ g.inverse()).m, np.eye(3), atol=1e-12)


def test_classify_identity_and_rotation():
    assert classify(PlaneIsometry.identity()).kind == "identity"
    assert classify(rotation(lift_from_klein(0.2, 0.2), 0.3)).kind == "elliptic"


def _translation(t: float):
    # reflections in two lines perpendicular to the x-axis, t/2 apart
    l1 = line_through(ORIGIN, lift_from_klein(0.0, 0.5))
    x = from_polar(t / 2, 0.0)
    l2 = GeodesicLine.from_pole(np.array([math.cosh(t / 2), 0.0, math.sinh(t / 2)]))
    assert abs(mdot(x.vec, l2.pole)) < 1e-12
    return compose(reflection(l2), reflection(l1))


@pytest.mark.parametrize("t", [0.01, 0.5, 2.0, 7.0])
def test_classify_translation(t):
    g = _translation(t)
    cls = classify(g)
    assert cls.kind == "hyperbolic"
    assert cls.translation_length == pytest.approx(t, abs=1e-9)
    assert np.trace(g.m) == pytest.approx(1 + 2 * math.cosh(t), abs=1e-9 * math.cosh(t))
    # measured displacement of a point on the axis
    assert distance(ORIGIN, g(ORIGIN)) == pytest.approx(t, abs=1e-9)
    # the axis is carried onto itself
    for s in (-1.0, 0.0, 2.5):
        p = from_polar(s, 0.0)
        assert abs(mdot(g(p).vec, cls.axis.pole)) < 1e-9


def test_classify_rejects_reflection():
    with pytest.raises(DomainError):
        classify(reflection(line_through(ORIGIN, lift_from_klein(0.3, 0.3))))


def test_classify_ambiguous_near_identity():
    with pytest.raises(ClassificationAmbiguousError):
        classify(rotation(lift_from_klein(0.1, 0.0), 1e-8))


def test_compose_stays_on_group():
    g = PlaneIsometry.identity()
    step = compose(rotation(lift_from_klein(0.3, 0.0), 2.0), rotation(ORIGIN, 1.0))
    for _ in range(500):
        g = compose(g, step)
    assert g.relative_drift() < 1e-10
