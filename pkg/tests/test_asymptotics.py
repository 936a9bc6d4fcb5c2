import math
from fractions import Fraction

import numpy as np
import pytest

from corpus import concave_contains, concave_corpus
from symcap.asymptotics import (
    Verdict,
    ball_error_terms,
    ball_oscillation,
    conjecture_check,
    embedding_obstruction,
    error_series,
    error_term,
    smooth_refinement,
    window_stats,
)
from symcap.capacities import ck_ball
from symcap.domains import Ball, Ellipsoid, Toric, Union
from symcap.geometry import Kind, ToricProfile, region_area, triangle_profile
from symcap.smooth import SmoothProfile

F = Fraction


def test_error_term_examples():
    assert error_term(0, 0, F(1, 2)) == 0
    assert error_term(1, 1, F(1, 2)) == pytest.approx(1 - math.sqrt(2))
    assert error_term(3, 6, F(1, 2)) == pytest.approx(3 - 2 * math.sqrt(3))
    with pytest.raises(ValueError):
        error_term(1, 1, 0)


def test_ball_error_terms_match_scalar_formula():
    ks = np.arange(0, 5000)
    fast = ball_error_terms(1, ks)
    slow = np.array([error_term(ck_ball(1, int(k)), int(k), F(1, 2)) for k in ks])
    assert np.allclose(fast, slow, atol=1e-12, rtol=0)


def test_ball_d_exact_near_squares():
    # k = (d^2 + d)/2 and k = (d^2 + 3d)/2 bracket each value of d
    d = np.arange(1, 200000, 997, dtype=np.int64)
    for ks in ((d * d + d) // 2, (d * d + 3 * d) // 2):
        e = ball_error_terms(1, ks)
        assert np.allclose(e, d - np.sqrt(2.0 * ks))


def test_ball_oscillation_examples():
    lo, hi = ball_oscillation(1, 10**4, 10**6)
    assert abs(lo + 1.5) < 0.01 and abs(hi + 0.5) < 0.01
    lo2, hi2 = ball_oscillation(2, 10**4, 10**6)
    assert lo2 == pytest.approx(2 * lo) and hi2 == pytest.approx(2 * hi)
    assert abs(lo2 + 3) < 0.02 and abs(hi2 + 1) < 0.02
    with pytest.raises(ValueError):
        ball_oscillation(1, 0, 10)


def test_ball_extremes_approach_limits_with_window_start():
    gaps = []
    for start in (10**3, 10**4, 10**5):
        lo, hi = ball_oscillation(1, start, 10 * start)
        gaps.append((abs(lo + 1.5), abs(hi + 0.5)))
    assert gaps[0][0] >= gaps[1][0] >= gaps[2][0]
    assert gaps[0][1] >= gaps[1][1] >= gaps[2][1]


def test_error_series_recomputes_bit_for_bit():
    s = error_series(Ellipsoid(3, 2), 300)
    vol = region_area(triangle_profile(3, 2))
    assert s.vol == vol
    for k, e, c in zip(s.ks, s.e, s.values[1:]):
        assert e == error_term(c, int(k), vol)


def test_error_series_window():
    s = error_series(Ball(1), 200, window_fraction=0.25)
    assert (s.window.lo, s.window.hi) == (150, 200)
    sel = s.e[149:200]
    assert s.window.min == sel.min() and s.window.max == sel.max()
    assert s.window.mean == pytest.approx(sel.mean())
    s2 = error_series(Ball(1), 200, window=(10, 20))
    assert (s2.window.lo, s2.window.hi) == (10, 20)
    with pytest.raises(ValueError):
        error_series(Ball(1), 0)
    with pytest.raises(ValueError):
        error_series(Ball(1), 10, window_fraction=0)


def test_window_stats_rejects_empty():
    with pytest.raises(ValueError):
        window_stats(np.arange(1, 5), np.zeros(4), 10, 20)


def test_conjecture_check_targets():
    s = conjecture_check(Ellipsoid(2, 1), 2000)
    assert s.ruelle_half == -1.5
    assert s.deviation == abs(s.window.mean + 1.5)
    b = conjecture_check(Ball(1), 5000)
    assert b.window.min < -1.0 < b.window.max
    u = conjecture_check(Union([Ball(1), Ball(1)]), 200)
    assert u.ruelle_half is None and u.deviation is None
    with pytest.raises(ValueError):
        conjecture_check(Ball(1), 50)


def test_ellipsoid_window_mean_near_prediction():
    s = conjecture_check(Ellipsoid(2, 1), 5000)
    # rational ellipsoids oscillate; the mean still sits within the oscillation band
    assert s.window.min <= -1.5 <= s.window.max
    assert s.deviation < 0.5


def test_smooth_refinement_reports_each_resolution():
    smooth = SmoothProfile.power(1.0, 1.0, 2.0)
    runs = smooth_refinement(smooth, [32, 64], 300, (150, 300))
    assert [n for n, _ in runs] == [32, 64]
    for _, s in runs:
        assert s.ruelle_half == -1.0 and not s.lower_bound_only


def test_error_terms_monotone_under_inclusion():
    # Omega in Omega' gives e_k <= e'_k + 2 sqrt(k) (sqrt(vol') - sqrt(vol))
    corpus = concave_corpus()
    checked = 0
    for p in corpus[:20]:
        for q in corpus[:20]:
            if p is q or not concave_contains(q, p):
                continue
            s, t = error_series(Toric(p), 40), error_series(Toric(q), 40)
            slack = 2 * np.sqrt(s.ks) * (math.sqrt(float(t.vol)) - math.sqrt(float(s.vol)))
            assert np.all(s.e <= t.e + slack + 1e-9)
            checked += 1
    assert checked > 0


def test_obstruction_examples():
    tri = triangle_profile(1)  # a + b = 2, area 1/2
    wide = ToricProfile(Kind.CONCAVE, [(0, F(1, 2)), (2, 0)])  # a + b = 5/2, area 1/2
    assert region_area(wide) == region_area(tri)
    r = embedding_obstruction(tri, wide)
    assert r.verdict is Verdict.OBSTRUCTED and (r.source_sum, r.target_sum) == (2, F(5, 2))
    assert r.hypotheses_asserted
    assert embedding_obstruction(wide, tri).verdict is Verdict.NOT_OBSTRUCTED
    assert embedding_obstruction(tri, tri).verdict is Verdict.NOT_OBSTRUCTED
    assert embedding_obstruction(tri, triangle_profile(2, 1)).verdict is Verdict.VOLUME_MISMATCH
    assert embedding_obstruction(tri, triangle_profile(2, 1), area_tol=1).verdict is Verdict.OBSTRUCTED


def test_obstruction_reflexive_on_corpus():
    for p in concave_corpus():
        assert embedding_obstruction(p, p).verdict is Verdict.NOT_OBSTRUCTED
