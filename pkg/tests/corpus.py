"""Seeded random profiles and brute-force oracles shared by the tests."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from symcap.geometry import Kind, ToricProfile


def random_concave_profile(rng, max_vertices=6, max_den=8, max_num=24) -> ToricProfile:
    """Graph of a convex piecewise-linear function, all coordinates in (1/D)Z."""
    D = int(rng.integers(1, max_den + 1))
    n_edges = int(rng.integers(1, max_vertices))
    edges = set()
    while len(edges) < n_edges:
        dx = int(rng.integers(1, max_num // 2 + 1))
        dy = int(rng.integers(1, max_num // 2 + 1))
        g = math.gcd(dx, dy)
        edges.add((dx // g, dy // g))
    # scale each primitive direction by a random length, steepest first
    edges = sorted(edges, key=lambda e: Fraction(e[1], e[0]), reverse=True)
    edges = [(dx * m, dy * m) for (dx, dy), m in zip(edges, rng.integers(1, 4, len(edges)).tolist())]
    b = sum(dy for _, dy in edges)
    pts = [(0, b)]
    x, y = 0, b
    for dx, dy in edges:
        x, y = x + dx, y - dy
        pts.append((x, y))
    return ToricProfile(Kind.CONCAVE, [(Fraction(px, D), Fraction(py, D)) for px, py in pts])


def random_convex_profile(rng, max_vertices=6, max_den=8, max_num=12) -> ToricProfile:
    """Reflection-convex profile: edges turn clockwise from horizontal towards vertical."""
    D = int(rng.integers(1, max_den + 1))
    n_edges = int(rng.integers(1, max_vertices))
    dirs = set()
    while len(dirs) < n_edges:
        dx = int(rng.integers(0, max_num // 2 + 1))
        dy = int(rng.integers(0, max_num // 2 + 1))
        if dx == dy == 0:
            continue
        g = math.gcd(dx, dy)
        dirs.add((dx // g, dy // g))
    dirs = sorted(dirs, key=lambda e: math.atan2(e[1], e[0]))
    edges = [(dx * m, dy * m) for (dx, dy), m in zip(dirs, rng.integers(1, 4, len(dirs)).tolist())]
    if sum(dx for dx, _ in edges) == 0:
        edges.insert(0, (1, 0))
    if sum(dy for _, dy in edges) == 0:
        edges.append((0, 1))
    b = sum(dy for _, dy in edges)
    pts = [(0, b)]
    x, y = 0, b
    for dx, dy in edges:
        x, y = x + dx, y - dy
        pts.append((x, y))
    return ToricProfile(Kind.CONVEX, [(Fraction(px, D), Fraction(py, D)) for px, py in pts])


def concave_corpus(n=50, seed=20240611):
    rng = np.random.default_rng(seed)
    return [random_concave_profile(rng) for _ in range(n)]


def convex_corpus(n=20, seed=7):
    rng = np.random.default_rng(seed)
    return [random_convex_profile(rng) for _ in range(n)]


# ---------------------------------------------------------------------------
# brute-force lattice oracles

def _graph_at(vertices, x):
    """Largest y on the polyline at abscissa x (handles vertical edges)."""
    best = None
    for (x1, y1), (x2, y2) in zip(vertices, vertices[1:]):
        lo, hi = min(x1, x2), max(x1, x2)
        if lo <= x <= hi:
            if x1 == x2:
                y = max(y1, y2)
            else:
                y = Fraction(y1) + Fraction(y2 - y1) * Fraction(x - x1, x2 - x1)
            best = y if best is None else max(best, y)
    return best


def brute_count_convex(vertices):
    a, b = vertices[-1][0], vertices[0][1]
    total = 0
    for x in range(a + 1):
        top = _graph_at(vertices, x) if len(vertices) > 1 else b
        total += math.floor(top) + 1
    return total


def brute_count_concave(vertices):
    a, b = vertices[-1][0], vertices[0][1]
    if len(vertices) == 1:
        return 0
    total = 0
    for x in range(a + 1):
        top = _graph_at(vertices, x)
        # points strictly below the path
        total += math.ceil(top)
    return total


def _norm_convex(profile, v):
    return max(abs(v[0]) * x + abs(v[1]) * y for x, y in profile.vertices)


def _norm_concave(profile, v):
    return min(v[0] * x + v[1] * y for x, y in profile.vertices)


def _primitive_dirs(n, allow_axes):
    out = []
    for p in range(0, n + 1):
        for q in range(0, n + 1):
            if math.gcd(p, q) != 1:
                continue
            if not allow_axes and (p == 0 or q == 0):
                continue
            out.append((p, q))
    return out


def brute_convex_capacity(profile, k, box):
    """Minimum Omega-length over convex lattice paths inside [0, box]^2 with count >= k+1."""
    dirs = sorted(_primitive_dirs(box, True), key=lambda d: math.atan2(d[1], d[0]))
    best = [None]

    def rec(i, x, edges):
        # edges are taken in slope order; count and length come from the full path
        ysum = sum(q for _, q in edges)
        if ysum <= box and x <= box:
            verts = [(0, ysum)]
            cx, cy = 0, ysum
            for p, q in edges:
                cx, cy = cx + p, cy - q
                verts.append((cx, cy))
            if brute_count_convex(verts) >= k + 1:
                length = sum(_norm_convex(profile, (q, p)) for p, q in edges)
                if best[0] is None or length < best[0]:
                    best[0] = length
        for j in range(i, len(dirs)):
            p, q = dirs[j]
            m = 1
            while x + m * p <= box and ysum + m * q <= box:
                rec(j + 1, x + m * p, edges + [(m * p, m * q)])
                m += 1

    rec(0, 0, [])
    return best[0]


def brute_concave_capacity(profile, k, box):
    """Maximum anti-norm length over concave lattice paths in [0, box]^2 with count <= k."""
    dirs = sorted(_primitive_dirs(box, False), key=lambda d: Fraction(d[1], d[0]), reverse=True)
    best = [Fraction(0)]

    def rec(i, x, edges):
        ysum = sum(q for _, q in edges)
        if edges:
            verts = [(0, ysum)]
            cx, cy = 0, ysum
            for p, q in edges:
                cx, cy = cx + p, cy - q
                verts.append((cx, cy))
            if brute_count_concave(verts) <= k:
                length = sum(_norm_concave(profile, (q, p)) for p, q in edges)
                best[0] = max(best[0], length)
            else:
                return  # adding edges only adds enclosed points
        for j in range(i, len(dirs)):
            p, q = dirs[j]
            m = 1
            while x + m * p <= box and ysum + m * q <= box:
                rec(j + 1, x + m * p, edges + [(m * p, m * q)])
                m += 1

    rec(0, 0, [])
    return best[0]


def concave_contains(outer: ToricProfile, inner: ToricProfile) -> bool:
    """Region under ``inner`` lies in the region under ``outer`` (concave profiles)."""
    if inner.a > outer.a or inner.b > outer.b:
        return False
    xs = sorted({x for x, _ in outer.vertices if x <= inner.a} | {x for x, _ in inner.vertices})
    for x in xs:
        if _graph_at(inner.vertices, x) > _graph_at(outer.vertices, x):
            return False
    return True
