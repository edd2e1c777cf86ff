import math

import numpy as np
import pytest

from hypergeo.cone import (
    Cone,
    ConeGeodesicQuery,
    brute_force_count,
    count_euclidean,
    count_hyperbolic,
    n_of,
    near_threshold,
    sweep,
    threshold,
    thresholds,
)
from hypergeo.errors import DomainError


def hyp(alpha, d):
    return ConeGeodesicQuery(Cone(alpha, "hyperbolic"), d)


def euc(alpha, d=1.0):
    return ConeGeodesicQuery(Cone(alpha, "euclidean"), d)


def test_n_of_cases():
    assert n_of(math.pi / 2) == 1
    assert n_of(math.pi) == 0
    assert n_of(2.0) == 1
    assert n_of(4.0) == 0
    assert n_of(2 * math.pi) == 0
    assert n_of(math.pi / 3) == 2
    assert n_of(0.9 * math.pi / 3) == 3


def test_n_of_counts_multiples_below_pi():
    for alpha in np.linspace(0.05, 4.0, 300):
        assert n_of(alpha) == sum(1 for k in range(1, 200) if k * alpha < math.pi - 1e-12)


def test_invalid_cones():
    with pytest.raises(DomainError):
        Cone(0.0)
    with pytest.raises(DomainError):
        hyp(1.0, -0.5)


def test_count_examples():
    assert count_hyperbolic(hyp(1.5 * math.pi, 0.3)) == 0
    assert count_hyperbolic(hyp(1.5 * math.pi, 3.0)) == 0
    assert threshold(1, math.pi / 2) == pytest.approx(0.8813735870195429, abs=1e-12)
    assert count_hyperbolic(hyp(math.pi / 2, 1.0)) == 0
    assert count_hyperbolic(hyp(math.pi / 2, 0.5)) == 1
    assert brute_force_count(hyp(math.pi / 2, 0.5)) == 1
    assert brute_force_count(hyp(math.pi / 2, 1.0)) == 0


def test_truncated_right_angle_literal():
    # 1.5707963 is just below pi/2, so two multiples fit under pi
    assert n_of(1.5707963) == 2
    assert count_euclidean(1.5707963) == brute_force_count(euc(1.5707963)) == 2


def test_euclidean_examples():
    assert count_euclidean(math.pi / 2) == 1
    assert count_euclidean(2 * math.pi) == 0
    assert count_euclidean(0.9 * math.pi / 3) == 3
    for d in (0.01, 1.0, 50.0):
        assert brute_force_count(euc(math.pi / 2, d)) == 1


def test_beyond_first_threshold_is_free():
    for alpha in (0.3, 1.0, 2.5):
        d = threshold(1, alpha) + 0.01
        assert count_hyperbolic(hyp(alpha, d)) == 0
        assert brute_force_count(hyp(alpha, d)) == 0


def test_threshold_ordering():
    for alpha in (0.05, 0.3, 1.0, math.pi / 4, 3.0):
        ts = thresholds(alpha)
        assert len(ts) == n_of(alpha)
        assert all(b < a for a, b in zip(ts, ts[1:]))
        assert all(m * alpha / 4 < math.pi / 2 for m in range(1, n_of(alpha) + 1))


def test_boundary_convention():
    alpha = 0.7
    t1, t2 = threshold(1, alpha), threshold(2, alpha)
    assert count_hyperbolic(hyp(alpha, t2)) == 1  # lower end inclusive
    assert count_hyperbolic(hyp(alpha, t1)) == 0  # upper end exclusive


def test_monotone_in_distance():
    for alpha in (0.2, 0.9, 1.7):
        counts = [count_hyperbolic(hyp(alpha, d)) for d in np.linspace(1e-4, 5, 500)]
        assert all(b <= a for a, b in zip(counts, counts[1:]))
        assert count_hyperbolic(hyp(alpha, 1e-9)) == count_euclidean(alpha)


def test_sweep_agreement():
    rows = sweep(200, seed=7)
    assert len(rows) == 200
    assert all(r["agree"] for r in rows)
    assert any(r["count_closed_form"] > 1 for r in rows)
    assert not any(near_threshold(r["alpha"], r["d"], 1e-6) for r in rows)


def test_sweep_deterministic():
    assert sweep(20, seed=1) == sweep(20, seed=1)


def test_euclidean_brute_force_random():
    rng = np.random.default_rng(2)
    for _ in range(50):
        alpha = float(rng.uniform(0.05, 6.5))
        assert brute_force_count(euc(alpha, float(rng.uniform(0.01, 3)))) == n_of(alpha)
