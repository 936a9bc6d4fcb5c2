"""Exact rational plane geometry for toric domains.

Everything here works on ``fractions.Fraction`` so that lattice counts,
areas and norms come out exact.  A toric domain is described by the
polygonal part of its moment image boundary, running from ``(0, b)`` on
the vertical axis to ``(a, 0)`` on the horizontal axis.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

Number = Union[int, Fraction]
Point = Tuple[Fraction, Fraction]
LatticePoint = Tuple[int, int]


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions, decimal strings or ``"p/q"`` strings exactly.

    Floats are converted through their shortest repr, so ``0.1`` becomes
    ``1/10`` rather than the binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def as_point(p) -> Point:
    x, y = p
    return (as_fraction(x), as_fraction(y))


def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


class Kind(enum.Enum):
    CONCAVE = "concave"
    CONVEX = "convex"


@dataclass(frozen=True)
class IntegralAffineMap:
    """``x -> M x + t`` with ``M`` in SL(2, Z) and ``t`` an integer vector."""

    matrix: Tuple[Tuple[int, int], Tuple[int, int]] = ((1, 0), (0, 1))
    translation: Tuple[Number, Number] = (0, 0)

    def __post_init__(self):
        (p, q), (r, s) = self.matrix
        if any(not isinstance(v, int) for v in (p, q, r, s)):
            raise ValueError("matrix entries must be integers")
        if p * s - q * r != 1:
            raise ValueError(f"determinant {p * s - q * r} != 1")

    def __call__(self, point) -> Point:
        (p, q), (r, s) = self.matrix
        x, y = as_point(point)
        tx, ty = self.translation
        return (p * x + q * y + tx, r * x + s * y + ty)


def apply_affine(amap: IntegralAffineMap, polyline: Iterable) -> Tuple[Point, ...]:
    return tuple(amap(p) for p in polyline)


def _rational_gcd(x: Fraction, y: Fraction) -> Fraction:
    den = x.denominator * y.denominator // math.gcd(x.denominator, y.denominator)
    return Fraction(math.gcd(int(x * den), int(y * den)), den)


def affine_length(path: Sequence) -> Fraction:
    """Sum of lattice lengths of the segments of a polygonal path.

    For a segment with displacement ``(dx, dy)`` this is the largest ``d``
    with ``(dx/d, dy/d)`` integral.  Rational vertices always give rational
    slope, so the irrational-slope case (length zero) cannot occur here.
    """
    pts = [as_point(p) for p in path]
    total = Fraction(0)
    for p, q in zip(pts, pts[1:]):
        dx, dy = _sub(q, p)
        total += _rational_gcd(dx, dy)
    return total


def shoelace2(vertices: Sequence[Point]):
    """Twice the signed area of a closed polygon (counterclockwise positive)."""
    n = len(vertices)
    s = 0
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return s


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class ToricProfile:
    """Polygonal upper boundary of a moment region, from ``(0, b)`` to ``(a, 0)``.

    ``kind`` decides which norm measures path lengths and which solvers
    apply.  Concave profiles are graphs of convex functions; convex profiles
    bound a region whose reflection-closure is convex.
    """

    kind: Kind
    vertices: Tuple[Point, ...]

    def __init__(self, kind, vertices):
        kind = Kind(kind) if not isinstance(kind, Kind) else kind
        pts = tuple(as_point(p) for p in vertices)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "vertices", pts)
        self._validate()

    def _validate(self):
        pts = self.vertices
        if len(pts) < 2:
            raise ProfileError("a profile needs at least two vertices")
        (x0, b), (a, y1) = pts[0], pts[-1]
        if x0 != 0 or y1 != 0:
            raise ProfileError("profile must run from (0, b) to (a, 0)")
        if a <= 0 or b <= 0:
            raise ProfileError("intercepts a and b must be positive")
        for p, q in zip(pts, pts[1:]):
            if p == q:
                raise ProfileError(f"repeated vertex {p}")
            if min(p) < 0:
                raise ProfileError(f"vertex {p} outside the nonnegative quadrant")
        edges = [_sub(q, p) for p, q in zip(pts, pts[1:])]
        if self.kind is Kind.CONCAVE:
            if any(dx <= 0 for dx, _ in edges):
                raise ProfileError("concave profile must have strictly increasing mu1")
            for e, f in zip(edges, edges[1:]):
                if cross(e, f) < 0:
                    raise ProfileError("concave profile is not the graph of a convex function")
        else:
            if any(dx < 0 or dy > 0 for dx, dy in edges):
                raise ProfileError("convex profile must move right and down")
            for e, f in zip(edges, edges[1:]):
                if cross(e, f) > 0:
                    raise ProfileError("convex profile bends the wrong way")

    @property
    def a(self) -> Fraction:
        return self.vertices[-1][0]

    @property
    def b(self) -> Fraction:
        return self.vertices[0][1]

    def scaled(self, r) -> "ToricProfile":
        r = as_fraction(r)
        if r <= 0:
            raise ValueError("scale must be positive")
        return ToricProfile(self.kind, [(x * r, y * r) for x, y in self.vertices])

    def with_kind(self, kind) -> "ToricProfile":
        return ToricProfile(kind, self.vertices)

    def denominator(self) -> int:
        """Least common denominator of all vertex coordinates."""
        den = 1
        for x, y in self.vertices:
            for v in (x, y):
                den = den * v.denominator // math.gcd(den, v.denominator)
        return den

    def polygon(self) -> Tuple[Point, ...]:
        """Closed counterclockwise polygon: origin, (a,0), boundary reversed."""
        zero = Fraction(0)
        return ((zero, zero),) + tuple(reversed(self.vertices))


def triangle_profile(a, b=None, kind=Kind.CONCAVE) -> ToricProfile:
    a = as_fraction(a)
    b = a if b is None else as_fraction(b)
    return ToricProfile(kind, [(0, b), (a, 0)])


def rectangle_profile(a, b) -> ToricProfile:
    a, b = as_fraction(a), as_fraction(b)
    return ToricProfile(Kind.CONVEX, [(0, b), (a, b), (a, 0)])


def region_area(profile: ToricProfile) -> Fraction:
    """Area of the moment region, which equals the volume of the toric domain."""
    return Fraction(shoelace2(profile.polygon())) / 2


def dual_norm(v, omega: ToricProfile) -> Fraction:
    """Support function of the reflection-closure of a convex region."""
    if omega.kind is not Kind.CONVEX:
        raise ValueError("dual norm is defined for convex profiles only")
    v1, v2 = abs(as_fraction(v[0])), abs(as_fraction(v[1]))
    return max(v1 * x + v2 * y for x, y in omega.vertices)


def anti_norm(v, omega: ToricProfile) -> Fraction:
    """Minimum of ``<v, w>`` over the boundary curve of a concave region."""
    if omega.kind is not Kind.CONCAVE:
        raise ValueError("anti-norm is defined for concave profiles only")
    v1, v2 = as_fraction(v[0]), as_fraction(v[1])
    return min(v1 * x + v2 * y for x, y in omega.vertices)


def rotate(v):
    """The quarter turn ``J(x, y) = (-y, x)``."""
    return (-v[1], v[0])


class PathKind(enum.Enum):
    CONVEX = "convex"
    CONCAVE = "concave"


@dataclass(frozen=True)
class LatticePath:
    vertices: Tuple[LatticePoint, ...]
    kind: PathKind = PathKind.CONVEX

    def __init__(self, vertices, kind=PathKind.CONVEX):
        pts = []
        for p in vertices:
            x, y = as_point(p)
            if x.denominator != 1 or y.denominator != 1:
                raise ValueError(f"vertex {p} is not a lattice point")
            pts.append((int(x), int(y)))
        if not pts:
            raise ValueError("empty lattice path")
        object.__setattr__(self, "vertices", tuple(pts))
        object.__setattr__(self, "kind", PathKind(kind))

    @property
    def edges(self):
        v = self.vertices
        return [(q[0] - p[0], q[1] - p[1]) for p, q in zip(v, v[1:])]

    @property
    def a(self) -> int:
        return self.vertices[-1][0]

    @property
    def b(self) -> int:
        return self.vertices[0][1]


def omega_length(path: LatticePath, omega: ToricProfile) -> Fraction:
    norm = dual_norm if omega.kind is Kind.CONVEX else anti_norm
    return sum((norm(rotate(e), omega) for e in path.edges), Fraction(0))


def _check_endpoints(path: LatticePath):
    (x0, _), (_, y1) = path.vertices[0], path.vertices[-1]
    if x0 != 0 or y1 != 0:
        raise ValueError("lattice path must run from (0, b) to (a, 0)")


def _region_count(path: LatticePath) -> int:
    """Lattice points in the closed region under the path, including boundary."""
    a, b = path.a, path.b
    poly = [(0, 0)] + list(reversed(path.vertices))
    area2 = abs(shoelace2(poly))
    if area2 == 0:
        # Pick's theorem needs a genuine polygon; walk the segments instead.
        pts = {(0, y) for y in range(b + 1)} | {(x, 0) for x in range(a + 1)}
        for (x0, y0), (dx, dy) in zip(path.vertices, path.edges):
            g = math.gcd(dx, dy)
            pts.update((x0 + i * dx // g, y0 + i * dy // g) for i in range(g + 1))
        return len(pts)
    boundary = a + b + sum(math.gcd(dx, dy) for dx, dy in path.edges)
    return (area2 + boundary) // 2 + 1


def lattice_count_convex(path: LatticePath) -> int:
    _check_endpoints(path)
    return _region_count(path)


def lattice_count_concave(path: LatticePath) -> int:
    """Enclosed lattice points, excluding those lying on the path itself."""
    _check_endpoints(path)
    on_path = 1 + sum(math.gcd(dx, dy) for dx, dy in path.edges)
    return _region_count(path) - on_path
