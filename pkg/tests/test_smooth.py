import math
from fractions import Fraction

import numpy as np
import pytest

from symcap.geometry import Kind, region_area
from symcap.smooth import SmoothProfile, polygonalize


def _interp(profile, x):
    xs = np.array([float(v[0]) for v in profile.vertices])
    ys = np.array([float(v[1]) for v in profile.vertices])
    return np.interp(x, xs, ys)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_concave_polygon_contains_curve(p):
    smooth = SmoothProfile.power(1.0, 2.0, p, Kind.CONCAVE)
    poly = polygonalize(smooth, 64)
    assert poly.kind is Kind.CONCAVE
    assert (poly.a, poly.b) == (1, 2)
    x = np.linspace(0, 1, 5001)
    assert np.all(_interp(poly, x) >= smooth.graph(x) - 1e-12)
    assert float(region_area(poly)) >= smooth.area()


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_convex_polygon_is_inscribed(p):
    smooth = SmoothProfile.power(2.0, 1.0, p, Kind.CONVEX)
    poly = polygonalize(smooth, 64)
    assert poly.kind is Kind.CONVEX
    x = np.linspace(0, 2, 5001)
    assert np.all(_interp(poly, x) <= smooth.graph(x) + 1e-12)
    assert float(region_area(poly)) <= smooth.area()


def test_area_closed_forms():
    assert SmoothProfile.line(2, 3).area() == 3
    # concave p = 2: int_0^1 (1 - sqrt x)^2 dx = 1/6
    assert SmoothProfile.power(1, 1, 2.0).area() == pytest.approx(1 / 6)
    # convex p = 2 is a quarter disk
    assert SmoothProfile.power(1, 1, 2.0, Kind.CONVEX).area() == pytest.approx(math.pi / 4)


@pytest.mark.parametrize("side", [Kind.CONCAVE, Kind.CONVEX])
def test_polygon_area_converges(side):
    smooth = SmoothProfile.power(1.0, 1.0, 3.0, side)
    gaps = [abs(float(region_area(polygonalize(smooth, n))) - smooth.area()) for n in (16, 64, 256)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-4


def test_polygon_coordinates_on_grid():
    poly = polygonalize(SmoothProfile.power(1.0, 1.0, 2.0), 32, denominator=1024)
    assert all(1024 % v.denominator == 0 for pt in poly.vertices for v in pt)
    assert poly.vertices[0] == (0, 1) and poly.vertices[-1] == (1, 0)


def test_parametric_polygon():
    t = np.linspace(0, 1, 33)
    s = np.column_stack([1 - t, t / (4 - 3 * t), -np.ones_like(t), 4 / (4 - 3 * t) ** 2])
    poly = polygonalize(SmoothProfile.parametric(s), 64)
    assert poly.kind is Kind.CONCAVE
    assert float(region_area(poly)) == pytest.approx(-1 / 3 - 4 / 9 * math.log(1 / 4), rel=1e-3)


def test_polygonalize_argument_checks():
    with pytest.raises(ValueError):
        polygonalize(SmoothProfile.line(1, 1), 1)
    with pytest.raises(ValueError):
        SmoothProfile.power(0, 1, 2.0)
    with pytest.raises(ValueError):
        SmoothProfile.parametric(np.zeros((4, 4)))
    t = np.linspace(0, 1, 9)
    s = np.column_stack([1 - t, t / (4 - 3 * t), -np.ones_like(t), 4 / (4 - 3 * t) ** 2])
    with pytest.raises(ValueError):
        SmoothProfile.parametric(s).graph(0.5)
