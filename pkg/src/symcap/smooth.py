"""Smooth boundary curves and their rational polygonal approximations."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .geometry import Kind, ToricProfile, as_fraction


class Family(enum.Enum):
    POWER = "power"
    LINE = "line"
    PARAMETRIC = "parametric"


@dataclass(frozen=True)
class SmoothProfile:
    """A curve from ``(a, 0)`` to ``(0, b)`` with negative slope inside the quadrant.

    ``POWER`` with side ``CONCAVE`` is ``(x/a)^(1/p) + (y/b)^(1/p) = 1``
    (a convex graph, so the region under it is a concave domain); side
    ``CONVEX`` is ``(x/a)^p + (y/b)^p = 1``.  ``LINE`` is the ellipsoid.
    ``PARAMETRIC`` interpolates ``(mu1, mu2, dmu1, dmu2)`` samples with
    cubic Hermite pieces on a uniform parameter grid over ``[0, 1]``.
    """

    family: Family
    a: float
    b: float
    p: float = 1.0
    side: Kind = Kind.CONCAVE
    samples: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "side", Kind(self.side))
        if self.a <= 0 or self.b <= 0:
            raise ValueError("a and b must be positive")
        if self.family is Family.POWER and self.p <= 1:
            raise ValueError("power profiles need p > 1")
        if self.family is Family.PARAMETRIC:
            self._load_samples()

    def _load_samples(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 2 or s.shape[1] != 4 or len(s) < 2:
            raise ValueError("samples must be rows (mu1, mu2, dmu1, dmu2)")
        # orient from (a, 0) to (0, b)
        if s[0, 0] < s[-1, 0]:
            s = s[::-1].copy()
            s[:, 2:] *= -1
        if not (np.isclose(s[0, 1], 0) and np.isclose(s[-1, 0], 0)):
            raise ValueError("samples must run between the two axes")
        h = 1.0 / (len(s) - 1)
        # first-order consistency between positions and tangents
        chord = np.diff(s[:, :2], axis=0)
        avg = 0.5 * (s[1:, 2:] + s[:-1, 2:]) * h
        scale = max(self.a, self.b)
        if np.max(np.abs(chord - avg)) > 0.05 * scale:
            raise ValueError("sample tangents disagree with sample positions")
        if np.any(s[:, 2] > 0) or np.any(s[:, 3] < 0):
            raise ValueError("curve must have negative slope")
        object.__setattr__(self, "samples", s)

    @classmethod
    def power(cls, a=1.0, b=1.0, p=2.0, side=Kind.CONCAVE):
        return cls(Family.POWER, float(a), float(b), float(p), Kind(side))

    @classmethod
    def line(cls, a=1.0, b=1.0):
        return cls(Family.LINE, float(a), float(b))

    @classmethod
    def parametric(cls, samples, side=Kind.CONCAVE):
        s = np.asarray(samples, dtype=float)
        a = float(max(s[0, 0], s[-1, 0]))
        b = float(max(s[0, 1], s[-1, 1]))
        return cls(Family.PARAMETRIC, a, b, 1.0, Kind(side), s)

    # -- parametrisation --------------------------------------------------

    def pieces(self) -> Sequence[Tuple[float, float]]:
        """Parameter intervals on which ``curve`` is smooth."""
        if self.family is Family.POWER and self.side is Kind.CONVEX:
            return [(0.0, 0.5), (0.5, 1.0)]
        if self.family is Family.PARAMETRIC:
            n = len(self.samples) - 1
            return [(i / n, (i + 1) / n) for i in range(n)]
        return [(0.0, 1.0)]

    def curve(self, t):
        """Position and velocity at parameter ``t`` in [0, 1]; t = 0 is (a, 0)."""
        t = np.asarray(t, dtype=float)
        a, b = self.a, self.b
        if self.family is Family.LINE:
            one = np.ones_like(t)
            return a * (1 - t), b * t, -a * one, b * one
        if self.family is Family.PARAMETRIC:
            return self._hermite(t)
        p = self.p
        if self.side is Kind.CONCAVE:
            s = 0.5 * math.pi * t
            c, sn = np.cos(s), np.sin(s)
            k = 0.5 * math.pi
            return (
                a * c ** (2 * p),
                b * sn ** (2 * p),
                -a * 2 * p * c ** (2 * p - 1) * sn * k,
                b * 2 * p * sn ** (2 * p - 1) * c * k,
            )
        return self._convex_power(t)

    def _convex_power(self, t):
        # two graphs glued where x/a = y/b: mu1 as a function of mu2 near
        # (a, 0), mu2 as a function of mu1 near (0, b)
        # (mu1 near a behaves like 1 - u^p / p); grading u = knee * s^3
        # towards the axes keeps Gauss-Legendre spectrally accurate for p < 2
        a, b, p = self.a, self.b, self.p
        knee = 2.0 ** (-1.0 / p)
        lo = t <= 0.5
        s = np.where(lo, 2 * t, 2 * (1 - t))
        u = knee * s**3
        w = (1 - u**p) ** (1 / p)
        dw = -(u ** (p - 1)) * (1 - u**p) ** (1 / p - 1)
        du = np.where(lo, 6 * knee * s**2, -6 * knee * s**2)
        x = np.where(lo, a * w, a * u)
        y = np.where(lo, b * u, b * w)
        dx = np.where(lo, a * dw * du, a * du)
        dy = np.where(lo, b * du, b * dw * du)
        return x, y, dx, dy

    def _hermite(self, t):
        s = self.samples
        n = len(s) - 1
        pos = np.clip(t * n, 0, n)
        i = np.minimum(pos.astype(int), n - 1)
        u = pos - i
        h = 1.0 / n
        p0, p1 = s[i, :2], s[i + 1, :2]
        m0, m1 = s[i, 2:] * h, s[i + 1, 2:] * h
        u = u[..., None]
        h00 = 2 * u**3 - 3 * u**2 + 1
        h10 = u**3 - 2 * u**2 + u
        h01 = -2 * u**3 + 3 * u**2
        h11 = u**3 - u**2
        xy = h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1
        d00 = 6 * u**2 - 6 * u
        d10 = 3 * u**2 - 4 * u + 1
        d01 = -6 * u**2 + 6 * u
        d11 = 3 * u**2 - 2 * u
        dxy = (d00 * p0 + d10 * m0 + d01 * p1 + d11 * m1) / h
        return xy[..., 0], xy[..., 1], dxy[..., 0], dxy[..., 1]

    def graph(self, x):
        """mu2 as a function of mu1 (power and line families)."""
        x = np.clip(np.asarray(x, dtype=float) / self.a, 0.0, 1.0)
        if self.family is Family.LINE:
            return self.b * (1 - x)
        if self.family is not Family.POWER:
            raise ValueError("graph is only available in closed form for power and line families")
        p = self.p
        if self.side is Kind.CONCAVE:
            return self.b * np.clip(1 - x ** (1 / p), 0, None) ** p
        return self.b * np.clip(1 - x**p, 0, None) ** (1 / p)

    def area(self) -> float:
        if self.family is Family.LINE:
            return self.a * self.b / 2
        if self.family is Family.POWER:
            p = self.p
            if self.side is Kind.CONCAVE:
                # int_0^1 (1 - x^(1/p))^p dx = Gamma(p+1)^2 / Gamma(2p+1)
                return self.a * self.b * math.exp(2 * math.lgamma(p + 1) - math.lgamma(2 * p + 1))
            return self.a * self.b * math.exp(2 * math.lgamma(1 + 1 / p) - math.lgamma(1 + 2 / p))
        x, y, dx, dy = self.curve(np.linspace(0, 1, 4097))
        return float(np.trapezoid(x * dy - y * dx, dx=1 / 4096)) / 2


def _hull(points, lower: bool):
    out = []
    for pt in points:
        while len(out) >= 2:
            (ox, oy), (ax, ay) = out[-2], out[-1]
            turn = (ax - ox) * (pt[1] - oy) - (ay - oy) * (pt[0] - ox)
            if (turn <= 0) if lower else (turn >= 0):
                out.pop()
            else:
                break
        out.append(pt)
    return out


def polygonalize(profile: SmoothProfile, n_samples: int = 256, denominator: int = 2**20) -> ToricProfile:
    """Rational polygon through Chebyshev-spaced points of the curve.

    For the concave side ordinates are rounded up and the lower hull taken,
    so the polygon's region contains the smooth one and its capacities are
    upper bounds; for the convex side ordinates are rounded down and the
    upper hull taken, giving an inscribed polygon and lower bounds.
    Endpoints ``(0, b)`` and ``(a, 0)`` are kept exactly.
    """
    if n_samples < 2:
        raise ValueError("need at least two samples")
    D = int(denominator)
    a, b = as_fraction(profile.a), as_fraction(profile.b)
    j = np.arange(n_samples)
    xs = 0.5 * profile.a * (1 - np.cos(math.pi * j / (n_samples - 1)))
    concave = profile.side is Kind.CONCAVE
    if profile.family is Family.PARAMETRIC:
        # sample the interpolant at Chebyshev parameters instead
        x, y, _, _ = profile.curve(0.5 * (1 - np.cos(math.pi * j / (n_samples - 1))))
        pts = sorted(zip(x.tolist(), y.tolist()))
    else:
        pts = list(zip(xs.tolist(), profile.graph(xs).tolist()))
    rnd = math.ceil if concave else math.floor
    verts = {Fraction(0): b, a: Fraction(0)}
    for x, y in pts:
        fx = Fraction(round(x * D), D)
        if 0 < fx < a:
            fy = Fraction(rnd(y * D), D)
            fy = min(max(fy, Fraction(0)), b)
            verts[fx] = fy
    pts = sorted(verts.items())
    hull = _hull(pts, lower=concave)
    if not concave:
        # keep the profile monotone: drop interior points that lie on the axes
        hull = [hull[0]] + [q for q in hull[1:-1] if q[1] > 0] + [hull[-1]]
    kind = Kind.CONCAVE if concave else Kind.CONVEX
    return ToricProfile(kind, hull)
