"""Lattice-path formulas for convex and concave toric domains.

A convex (resp. concave) integral path is determined by the multiset of its
edge vectors: sorting them by slope rebuilds the path.  Writing an edge as
``(p, -q)`` with ``p, q >= 0``, Pick's theorem splits the lattice count of
the region under the path into per-edge terms

    convex:   q * P + (p*q + p + q + g) / 2      (closed region, boundary in)
    concave:  q * P + (p*q + p + q - g) / 2      (points on the path left out)

where ``P`` is the total horizontal extent of the edges placed before this
one and ``g = gcd(p, q)``.  The only state that couples edges is therefore
``P``, and a table indexed by ``(P, count)`` and filled one slope class at
a time gives the optimum for every ``k`` up to ``kmax`` in one sweep.

Lengths are exact: vertex coordinates are scaled by the profile's common
denominator so every norm value is an integer.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from .capacities import CapacityResult, Method, ck_polydisk
from .geometry import (
    Kind,
    LatticePath,
    PathKind,
    ToricProfile,
    omega_length,
)

_INF = np.int64(2**62)
_NEG = np.int64(-(2**62))


def _scaled(omega: ToricProfile):
    den = omega.denominator()
    return den, [(int(x * den), int(y * den)) for x, y in omega.vertices]


def _slope_order(steep_first: bool):
    def cmp(u, v):
        # u before v when q_u / p_u < q_v / p_v
        d = u[1] * v[0] - v[1] * u[0]
        d = -d if steep_first else d
        return -1 if d < 0 else (1 if d > 0 else 0)

    return functools.cmp_to_key(cmp)


class _Layer:
    """Choices recorded while folding in one slope class (sparse)."""

    __slots__ = ("p", "q", "idx", "mult", "src")

    def __init__(self, p, q, choice, src):
        self.p, self.q = p, q
        self.idx = np.flatnonzero(choice)
        self.mult = choice.ravel()[self.idx]
        self.src = src.ravel()[self.idx]

    def lookup(self, flat):
        i = np.searchsorted(self.idx, flat)
        if i < len(self.idx) and self.idx[i] == flat:
            return int(self.mult[i]), int(self.src[i])
        return 0, -1


def _walk(layers, shape, P, L, start_L):
    """Recover the edges of an optimal path by replaying recorded choices."""
    edges = []
    ncol = shape[1]
    for layer in reversed(layers):
        m, src = layer.lookup(P * ncol + L)
        if m == 0:
            continue
        P -= m * layer.p
        L = src
        edges.append((m * layer.p, m * layer.q))
    assert (P, L) == (0, start_L), "witness replay did not reach the empty path"
    edges.reverse()
    return edges


def _edges_to_path(edges, kind) -> LatticePath:
    y = sum(q for _, q in edges)
    x = 0
    pts = [(0, y)]
    for p, q in edges:
        x, y = x + p, y - q
        pts.append((x, y))
    return LatticePath(pts, kind)


# ---------------------------------------------------------------------------
# convex domains: minimum length subject to enough lattice points

def _convex_gauge(verts, z):
    """Smallest r with the lattice point z inside r * Omega (convex case)."""
    best = Fraction(0)
    for (x1, y1), (x2, y2) in zip(verts, verts[1:]):
        nx, ny = y1 - y2, x2 - x1
        c = nx * x1 + ny * y1
        best = max(best, Fraction(nx * z[0] + ny * z[1], c))
    return best


def _upper_hull(points):
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (ox, oy), (ax, ay) = hull[-2], hull[-1]
            if (ax - ox) * (pt[1] - oy) - (ay - oy) * (pt[0] - ox) >= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def _lower_hull(points):
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (ox, oy), (ax, ay) = hull[-2], hull[-1]
            if (ax - ox) * (pt[1] - oy) - (ay - oy) * (pt[0] - ox) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def convex_hull_path(omega: ToricProfile, k: int) -> LatticePath:
    """Hull of the lattice points in the smallest scaling holding k+1 of them."""
    if omega.kind is not Kind.CONVEX:
        raise ValueError("convex profile required")
    verts = omega.vertices
    area = float(omega.a * omega.b)
    R = math.sqrt((k + 1) / area) + 2
    while True:
        X, Y = int(R * omega.a) + 1, int(R * omega.b) + 1
        pts = [(x, y) for x in range(X + 1) for y in range(Y + 1)]
        gauges = sorted(_convex_gauge(verts, z) for z in pts)
        if len(gauges) > k and gauges[k] <= R:
            r = gauges[k]
            break
        R *= 2
    top = {}
    for z in pts:
        if _convex_gauge(verts, z) <= r:
            top[z[0]] = max(top.get(z[0], -1), z[1])
    cols = sorted(top.items())
    hull = _upper_hull(cols)
    if hull[-1][1] > 0:
        hull.append((hull[-1][0], 0))
    return LatticePath(hull, PathKind.CONVEX)


class ConvexPathTable:
    """``min { length(path) : count(path) >= k + 1 }`` for all ``k <= kmax``."""

    def __init__(self, omega: ToricProfile, kmax: int):
        if omega.kind is not Kind.CONVEX:
            raise ValueError("convex path solver needs a convex profile")
        if kmax < 0:
            raise ValueError("kmax must be nonnegative")
        self.omega, self.kmax = omega, kmax
        den, verts = _scaled(omega)
        self.den = den
        A, B = verts[-1][0], verts[0][1]

        def norm(q, p):
            return max(q * x + p * y for x, y in verts)

        hull = convex_hull_path(omega, kmax)
        U = min(
            int(omega_length(hull, omega) * den),
            int(ck_polydisk(omega.b, omega.a, kmax) * den),
        )
        self.upper = Fraction(U, den)
        pmax, qmax = U // B, U // A
        cap = kmax + 1
        dirs = [
            (p, q)
            for p in range(pmax + 1)
            for q in range(qmax + 1)
            if math.gcd(p, q) == 1
        ]
        dirs.sort(key=_slope_order(steep_first=False))

        shape = (pmax + 1, cap + 1)
        dp = np.full(shape, _INF, dtype=np.int64)
        dp[0, 1] = 0
        layers = []
        for p, q in dirs:
            h = norm(q, p)
            if h > U:
                continue
            new = dp.copy()
            choice = np.zeros(shape, dtype=np.int16)
            src = np.full(shape, -1, dtype=np.int32)
            live = np.flatnonzero((dp < _INF).any(axis=1))
            cols = np.arange(cap + 1, dtype=np.int32)
            m = 1
            while m * h <= U and m * p <= pmax:
                cost = m * h
                base = (m * m * p * q + m * (p + q + 1)) // 2
                for P in live:
                    P = int(P)
                    T = P + m * p
                    if T > pmax:
                        break
                    row = dp[P]
                    shift = m * q * P + base
                    if shift < cap:
                        cand = row[: cap - shift] + cost
                        seg = new[T, shift:cap]
                        better = cand < seg
                        if better.any():
                            seg[better] = cand[better]
                            choice[T, shift:cap][better] = m
                            src[T, shift:cap][better] = cols[: cap - shift][better]
                        tail = row[cap - shift:]
                        off = cap - shift
                    else:
                        tail, off = row, 0
                    j = int(np.argmin(tail))
                    if tail[j] + cost < new[T, cap]:
                        new[T, cap] = tail[j] + cost
                        choice[T, cap] = m
                        src[T, cap] = off + j
                m += 1
            new[new > U] = _INF
            dp = new
            layers.append(_Layer(p, q, choice, src))
        self.dp, self.layers, self.shape = dp, layers, shape
        # best[L] = min over states with count >= L
        colmin = dp.min(axis=0)
        self.best = np.minimum.accumulate(colmin[::-1])[::-1]

    def value(self, k: int) -> Fraction:
        v = self.best[k + 1]
        if v >= _INF:
            raise RuntimeError("upper bound failed to cover k")  # pragma: no cover
        return Fraction(int(v), self.den)

    def witness(self, k: int) -> LatticePath:
        target = self.best[k + 1]
        sub = self.dp[:, k + 1:]
        hits = np.argwhere(sub == target)
        P, L = int(hits[0][0]), int(hits[0][1]) + k + 1
        edges = _walk(self.layers, self.shape, P, L, 1)
        return _edges_to_path(edges, PathKind.CONVEX)

    def result(self, k: int) -> CapacityResult:
        return CapacityResult(k, self.value(k), Method.CONVEX_PATH_MIN, self.witness(k))


def ck_convex_path(omega: ToricProfile, k: int) -> CapacityResult:
    return ConvexPathTable(omega, k).result(k)


def convex_path_sequence(omega: ToricProfile, kmax: int) -> List[CapacityResult]:
    table = ConvexPathTable(omega, kmax)
    return [table.result(k) for k in range(kmax + 1)]


# ---------------------------------------------------------------------------
# concave domains: maximum length subject to few enclosed lattice points

def _concave_gauge(verts, z):
    """Smallest r with z in r * Omega, by intersecting the ray with the boundary."""
    if z == (0, 0):
        return Fraction(0)
    for (x1, y1), (x2, y2) in zip(verts, verts[1:]):
        dx, dy = x2 - x1, y2 - y1
        den = z[0] * dy - z[1] * dx
        if den == 0:
            continue
        t = Fraction(x1 * dy - y1 * dx, den)
        s = Fraction(x1 * z[1] - y1 * z[0], den)
        if 0 <= s <= 1 and t > 0:
            return 1 / t
    raise ValueError(f"ray through {z} misses the boundary")  # pragma: no cover


def concave_hull_path(omega: ToricProfile, k: int) -> LatticePath:
    """Boundary of the hull of lattice points outside the largest scaling with <= k points."""
    if omega.kind is not Kind.CONCAVE:
        raise ValueError("concave profile required")
    verts = omega.vertices
    n = k + 2
    pts = [(x, y) for x in range(n) for y in range(n)]
    g = {z: _concave_gauge(verts, z) for z in pts}
    r = sorted(g.values())[k]
    low = {}
    for (x, y), v in g.items():
        if v >= r and (x not in low or y < low[x]):
            low[x] = y
    cols = []
    for x in range(n):
        cols.append((x, low[x]))
        if low[x] == 0:
            break
    return LatticePath(_lower_hull(cols), PathKind.CONCAVE)


class ConcavePathTable:
    """``max { length(path) : count(path) <= k }`` for all ``k <= kmax``."""

    def __init__(self, omega: ToricProfile, kmax: int):
        if omega.kind is not Kind.CONCAVE:
            raise ValueError("concave path solver needs a concave profile")
        if kmax < 0:
            raise ValueError("kmax must be nonnegative")
        self.omega, self.kmax = omega, kmax
        den, verts = _scaled(omega)
        self.den = den

        def norm(q, p):
            return min(q * x + p * y for x, y in verts)

        # both intercepts of a feasible path are at most kmax: the axis points
        # below and left of the path are all counted
        dirs = [
            (p, q)
            for p in range(1, kmax + 1)
            for q in range(1, kmax + 1)
            if math.gcd(p, q) == 1 and (p * q + p + q - 1) // 2 <= kmax
        ]
        dirs.sort(key=_slope_order(steep_first=True))

        shape = (kmax + 1, kmax + 1)
        dp = np.full(shape, _NEG, dtype=np.int64)
        dp[0, 0] = 0
        layers = []
        for p, q in dirs:
            h = norm(q, p)
            new = dp.copy()
            choice = np.zeros(shape, dtype=np.int16)
            src = np.full(shape, -1, dtype=np.int32)
            live = np.flatnonzero((dp > _NEG).any(axis=1))
            Pv, Lv = np.nonzero(dp[live] > _NEG)
            Pv = live[Pv]
            vals = dp[Pv, Lv]
            m = 1
            while m * p <= kmax:
                base = (m * m * p * q + m * (p + q - 1)) // 2
                if base > kmax:
                    break
                # for a fixed m distinct sources land on distinct targets
                T = Pv + m * p
                L2 = Lv + m * q * Pv + base
                ok = (T <= kmax) & (L2 <= kmax)
                flat = T[ok] * (kmax + 1) + L2[ok]
                cand = vals[ok] + m * h
                better = cand > new.flat[flat]
                new.flat[flat[better]] = cand[better]
                choice.flat[flat[better]] = m
                src.flat[flat[better]] = Lv[ok][better]
                m += 1
            dp = new
            layers.append(_Layer(p, q, choice, src))
        self.dp, self.layers, self.shape = dp, layers, shape
        self.best = np.maximum.accumulate(dp.max(axis=0))

    def value(self, k: int) -> Fraction:
        return Fraction(int(self.best[k]), self.den)

    def witness(self, k: int) -> LatticePath:
        target = self.best[k]
        hits = np.argwhere(self.dp[:, : k + 1] == target)
        P, L = int(hits[0][0]), int(hits[0][1])
        edges = _walk(self.layers, self.shape, P, L, 0)
        return _edges_to_path(edges, PathKind.CONCAVE)

    def result(self, k: int) -> CapacityResult:
        return CapacityResult(k, self.value(k), Method.CONCAVE_PATH_MAX, self.witness(k))


def ck_concave_path(omega: ToricProfile, k: int) -> CapacityResult:
    return ConcavePathTable(omega, k).result(k)


def concave_path_sequence(omega: ToricProfile, kmax: int) -> List[CapacityResult]:
    table = ConcavePathTable(omega, kmax)
    return [table.result(k) for k in range(kmax + 1)]


def hull_bounds(omega: ToricProfile, k: int) -> Tuple[Fraction, LatticePath]:
    """Length of the hull path: an upper bound (convex) or lower bound (concave) on c_k."""
    if omega.kind is Kind.CONVEX:
        path = convex_hull_path(omega, k)
    else:
        path = concave_hull_path(omega, k)
    return omega_length(path, omega), path
