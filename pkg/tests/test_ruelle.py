import math
from fractions import Fraction

import numpy as np
import pytest

from symcap.geometry import Kind
from symcap.ruelle import (
    InterceptError,
    ruelle_integral,
    ruelle_quadrature,
    ruelle_toric,
    rotation_density,
    tangent_intercepts,
)
from symcap.smooth import SmoothProfile


def test_tangent_intercepts_examples():
    t = tangent_intercepts((0.5, 0.5), (-1.0, 1.0))
    assert (t.alpha, t.beta) == (1.0, 1.0)
    b, s = 3.0, -0.75
    t = tangent_intercepts((0.0, b), (1.0, s))
    assert t.alpha == pytest.approx(-b / s) and t.beta == pytest.approx(b)
    c = math.sqrt(2) / 2
    t = tangent_intercepts((c, c), (-c, c))
    assert t.alpha == pytest.approx(t.beta)


def test_tangent_relation_holds():
    rng = np.random.default_rng(3)
    for _ in range(200):
        x, y = rng.uniform(0.1, 3, 2)
        vx, vy = -rng.uniform(0.1, 2), rng.uniform(0.1, 2)
        t = tangent_intercepts((x, y), (vx, vy))
        assert abs(t.beta * x + t.alpha * y - t.alpha * t.beta) < 1e-10 * max(1, t.alpha * t.beta)


def test_tangent_intercepts_rejects_bad_slopes():
    for v in ((1.0, 1.0), (0.0, 1.0), (-1.0, 0.0), (-1.0, -1.0)):
        with pytest.raises(InterceptError):
            tangent_intercepts((0.5, 0.5), v)
    with pytest.raises(InterceptError):
        # tangent line through the origin
        tangent_intercepts((1.0, -1.0), (-1.0, 1.0))


def test_rotation_density_examples():
    assert rotation_density((0.5, 0.5), (-1.0, 1.0)) == 2
    # tangent line x/2 + y = 1
    assert rotation_density((1.0, 0.5), (-2.0, 1.0)) == pytest.approx(1.5)
    for c in (0.5, 2.0, 3.0):
        for s in (0.1, 0.5, 0.9):
            assert rotation_density((s * c, (1 - s) * c), (-1.0, 1.0)) == pytest.approx(2 / c)


def test_ruelle_toric_examples():
    assert ruelle_toric(3, 3) == 6
    assert ruelle_toric(2, 1) == 3
    assert ruelle_toric(1, 1) == 2
    assert ruelle_toric("1/2", Fraction(1, 3)) == Fraction(5, 6)
    with pytest.raises(ValueError):
        ruelle_toric(0, 1)


@pytest.mark.parametrize("n", [8, 16, 64, 256])
def test_line_is_exact_at_any_resolution(n):
    for a, b in ((1, 1), (2, 1), (0.3, 5)):
        assert ruelle_integral(SmoothProfile.line(a, b), n) == pytest.approx(a + b, abs=1e-12)


@pytest.mark.parametrize("side", [Kind.CONCAVE, Kind.CONVEX])
@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.5])
@pytest.mark.parametrize("ab", [(1.0, 1.0), (2.0, 1.0), (0.5, 3.0)])
def test_power_profiles(side, p, ab):
    a, b = ab
    rep = ruelle_quadrature(SmoothProfile.power(a, b, p, side), 256)
    assert abs(rep.value - (a + b)) < 1e-8
    assert rep.max_residual < 1e-10
    assert ruelle_quadrature(SmoothProfile.power(a, b, p, side), 256, mode="reduced").value == pytest.approx(a + b, abs=1e-12)


def test_power_p2_at_64_nodes():
    assert abs(ruelle_integral(SmoothProfile.power(1, 1, 2.0), 64) - 2) < 1e-8


def test_refinement_does_not_increase_error():
    prof = SmoothProfile.power(1.0, 1.0, 2.0, Kind.CONVEX)
    errs = [abs(ruelle_integral(prof, n) - 2) for n in (8, 16, 32, 64, 128, 256)]
    for e0, e1 in zip(errs, errs[1:]):
        assert e1 <= max(e0, 1e-13)
    assert errs[-1] < 1e-8


def test_reversal_flips_sign():
    for prof in (SmoothProfile.line(2, 1), SmoothProfile.power(1, 2, 3.0), SmoothProfile.power(1, 1, 2.0, Kind.CONVEX)):
        fwd = ruelle_integral(prof, 128)
        assert ruelle_integral(prof, 128, reverse=True) == -fwd


def _samples(n, a=1.0, b=1.0):
    # x = a(1 - t), y = b t / (4 - 3t): the graph of a convex decreasing function
    # with nonzero slope at both axes
    t = np.linspace(0, 1, n + 1)
    x, y = a * (1 - t), b * t / (4 - 3 * t)
    dx, dy = -a * np.ones_like(t), 4 * b / (4 - 3 * t) ** 2
    return np.column_stack([x, y, dx, dy])


def test_parametric_samples():
    s = _samples(64, 2.0, 1.0)
    prof = SmoothProfile.parametric(s)
    assert (prof.a, prof.b) == (2.0, 1.0)
    assert abs(ruelle_integral(prof, 512) - 3) < 1e-8
    assert abs(ruelle_integral(prof, 512, mode="reduced") - 3) < 1e-12
    # the same samples listed the other way round describe the same curve
    rev = s[::-1].copy()
    rev[:, 2:] *= -1
    assert ruelle_integral(SmoothProfile.parametric(rev), 512) == pytest.approx(ruelle_integral(prof, 512), abs=1e-12)
    # area under the graph: a * int_0^1 b t / (4 - 3t) dt
    exact = 2.0 * (-1 / 3 - 4 / 9 * math.log(1 / 4))
    assert prof.area() == pytest.approx(exact, rel=1e-5)


def test_parametric_validation():
    s = _samples(16)
    bad = s.copy()
    bad[:, 2:] *= 3
    with pytest.raises(ValueError):
        SmoothProfile.parametric(bad)
    with pytest.raises(ValueError):
        SmoothProfile.parametric(s[:, :3])
    with pytest.raises(ValueError):
        SmoothProfile.parametric(s[2:])


def test_quadrature_argument_checks():
    with pytest.raises(ValueError):
        ruelle_integral(SmoothProfile.line(1, 1), 4)
    with pytest.raises(ValueError):
        ruelle_quadrature(SmoothProfile.line(1, 1), 64, mode="bogus")
    with pytest.raises(ValueError):
        SmoothProfile.power(1, 1, 1.0)
