"""Lower bounds on error terms from dyadic cube packings.

A domain in R^4 (coordinates ``u1, v1, u2, v2``) is filled with closed
dyadic cubes, coarsest first.  A cube of side ``2^-n`` is a product of two
squares of area ``4^-n``, i.e. a polydisk with both factors of area
``4^-n``.  Knowing how many cubes of each size fit gives a lower bound on
``e_k`` through the disjoint-union axiom and the polydisk capacities.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .capacities import ck_polydisk
from .geometry import Kind, ToricProfile, as_fraction

# relative shrink applied to floating-point toric membership tests
SAFETY = 1e-12
SUBSAMPLE = 4


@dataclass(frozen=True)
class MembershipOracle:
    """Point membership for a compact set in R^4.

    ``contains`` maps an ``(N, 4)`` array to booleans.  ``grid`` may map a
    tuple of four coordinate vectors to the boolean membership array of the
    full tensor grid, which is much faster for product-structured sets.
    ``convex_safe`` declares that a closed cell lies in the set as soon as
    all of its vertices do (true for convex sets).
    """

    contains: Callable[[np.ndarray], np.ndarray]
    lo: Tuple[float, float, float, float]
    hi: Tuple[float, float, float, float]
    convex_safe: bool = False
    grid: Optional[Callable] = None

    def on_grid(self, axes) -> np.ndarray:
        axes = [np.asarray(a, dtype=float) for a in axes]
        if self.grid is not None:
            out = self.grid(axes)
        else:
            mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
            out = self.contains(mesh.reshape(-1, 4)).reshape(mesh.shape[:-1])
        return out & _outer_and([(a >= l) & (a <= h) for a, l, h in zip(axes, self.lo, self.hi)])


def _outer_and(masks):
    """Tensor product of four 1-d boolean masks."""
    m0, m1, m2, m3 = masks
    return m0[:, None, None, None] & m1[None, :, None, None] & m2[None, None, :, None] & m3[None, None, None, :]


def box_oracle(lo, hi) -> MembershipOracle:
    lo = tuple(float(x) for x in (lo if np.ndim(lo) else [lo] * 4))
    hi = tuple(float(x) for x in (hi if np.ndim(hi) else [hi] * 4))
    lo_a, hi_a = np.array(lo), np.array(hi)

    def contains(pts):
        pts = np.asarray(pts, dtype=float)
        return np.all((pts >= lo_a) & (pts <= hi_a), axis=-1)

    def grid(axes):
        return _outer_and([(a >= l) & (a <= h) for a, l, h in zip(axes, lo, hi)])

    return MembershipOracle(contains, lo, hi, True, grid)


def _region_test(profile: ToricProfile):
    """Vectorised ``(x, y) in Omega`` for the moment region, slightly shrunk."""
    xs = np.array([float(x) for x, _ in profile.vertices])
    ys = np.array([float(y) for _, y in profile.vertices])
    a, b = float(profile.a), float(profile.b)
    convex = profile.kind is Kind.CONVEX

    def test(x, y):
        x = x * (1 + SAFETY)
        y = y * (1 + SAFETY)
        ok = (x >= 0) & (y >= 0) & (x <= a) & (y <= b)
        if convex:
            # below every edge line (edges run right and down)
            for (x1, y1), (x2, y2) in zip(zip(xs, ys), zip(xs[1:], ys[1:])):
                ok &= (y2 - y1) * (x - x1) - (x2 - x1) * (y - y1) <= 0
            return ok
        return ok & (y <= np.interp(x, xs, ys))

    return test


def toric_oracle(profile: ToricProfile, convex_safe: Optional[bool] = None) -> MembershipOracle:
    """``(pi(u1^2 + v1^2), pi(u2^2 + v2^2)) in Omega``."""
    test = _region_test(profile)
    r1 = math.sqrt(float(profile.a) / math.pi)
    r2 = math.sqrt(float(profile.b) / math.pi)
    lo, hi = (-r1, -r1, -r2, -r2), (r1, r1, r2, r2)
    if convex_safe is None:
        # convex regions and straight lines give convex subsets of R^4
        convex_safe = profile.kind is Kind.CONVEX or len(profile.vertices) == 2

    def contains(pts):
        pts = np.asarray(pts, dtype=float)
        s1 = math.pi * (pts[..., 0] ** 2 + pts[..., 1] ** 2)
        s2 = math.pi * (pts[..., 2] ** 2 + pts[..., 3] ** 2)
        return test(s1, s2)

    def grid(axes):
        u1, v1, u2, v2 = axes
        s1 = math.pi * (u1[:, None] ** 2 + v1[None, :] ** 2)
        s2 = math.pi * (u2[:, None] ** 2 + v2[None, :] ** 2)
        return test(s1[:, :, None, None], s2[None, None, :, :])

    return MembershipOracle(contains, lo, hi, convex_safe, grid)


def complement_oracle(oracle: MembershipOracle, lo, hi) -> MembershipOracle:
    """Points of the box ``[lo, hi]`` outside the set; never convex-safe."""
    box = box_oracle(lo, hi)

    def contains(pts):
        return box.contains(pts) & ~oracle.contains(pts)

    def grid(axes):
        return box.grid(axes) & ~oracle.on_grid(axes)

    return MembershipOracle(contains, box.lo, box.hi, False, grid)


@dataclass
class CubePacking:
    per_level: Dict[int, int]
    max_level: int
    # lower-corner lattice indices of accepted cubes, per level
    cells: Dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    def a_of_level(self, n: int) -> Fraction:
        return Fraction(1, 4**n)

    @property
    def covered_volume(self) -> Fraction:
        return sum((Fraction(m, 16**n) for n, m in self.per_level.items()), Fraction(0))

    def sums(self, vol, k: int) -> Tuple[Fraction, Fraction]:
        """``(sum of a_i, sum of a_i^2)`` over cubes with ``a_i^2 >= vol / k``."""
        vol = as_fraction(vol)
        sa, sv = Fraction(0), Fraction(0)
        for n, m in self.per_level.items():
            a = self.a_of_level(n)
            if a * a * k >= vol:
                sa += m * a
                sv += m * a * a
        return sa, sv


def _axis(lo, hi, n):
    i0 = math.floor(lo * 2**n)
    i1 = math.ceil(hi * 2**n)
    return i0, np.arange(i0, i1 + 1)


def _cell_mask(oracle: MembershipOracle, n: int, axes_idx):
    """Cells (indexed by lower corners) whose closure passes the containment test."""
    h = 2.0**-n
    axes = [idx * h for idx in axes_idx]
    verts = oracle.on_grid(axes)
    shape = tuple(len(a) - 1 for a in axes_idx)
    ok = np.ones(shape, dtype=bool)
    for shift in itertools.product((0, 1), repeat=4):
        sl = tuple(slice(s, s + m) for s, m in zip(shift, shape))
        ok &= verts[sl]
    if not ok.any():
        return ok
    if oracle.convex_safe:
        centres = [a[:-1] + h / 2 for a in axes]
        ok &= oracle.on_grid(centres)
        return ok
    N = SUBSAMPLE
    offs = (np.arange(N) + 0.5) / N * h
    fine = [(a[:-1][:, None] + offs[None, :]).ravel() for a in axes]
    sub = oracle.on_grid(fine)
    sub = sub.reshape(shape[0], N, shape[1], N, shape[2], N, shape[3], N)
    ok &= sub.all(axis=(1, 3, 5, 7))
    return ok


def dyadic_pack(oracle: MembershipOracle, max_level: int, keep_cells: bool = True) -> CubePacking:
    """Greedy dyadic packing, level 1 (side 1/2) down to ``max_level``.

    A level-n cube is accepted when its closed cell passes the containment
    test and no coarser accepted cube contains it.
    """
    if max_level < 1:
        raise ValueError("max_level must be at least 1")
    per_level: Dict[int, int] = {}
    cells: Dict[int, np.ndarray] = {}
    prev = None  # (origin indices, blocked mask over cells) at the previous level
    for n in range(1, max_level + 1):
        spans = [_axis(l, h, n) for l, h in zip(oracle.lo, oracle.hi)]
        origin = [s[0] for s in spans]
        idx = [s[1] for s in spans]
        ok = _cell_mask(oracle, n, idx)
        cell_idx = [i[:-1] for i in idx]
        if prev is not None:
            p_origin, p_blocked = prev
            pi = [(ci // 2) - po for ci, po in zip(cell_idx, p_origin)]
            valid = [(q >= 0) & (q < s) for q, s in zip(pi, p_blocked.shape)]
            clip = [np.clip(q, 0, s - 1) for q, s in zip(pi, p_blocked.shape)]
            blocked = p_blocked[np.ix_(*clip)] & _outer_and(valid)
        else:
            blocked = np.zeros(ok.shape, dtype=bool)
        accept = ok & ~blocked
        per_level[n] = int(accept.sum())
        if keep_cells:
            hits = np.argwhere(accept)
            cells[n] = hits + np.array(origin)
        prev = (origin, blocked | accept)
    return CubePacking(per_level, max_level, cells)


def ek_polydisk(a, k: int) -> float:
    a = as_fraction(a)
    return float(ck_polydisk(a, a, k)) - 2 * float(a) * math.sqrt(k)


def ek_polydisk_lower(a, k: int) -> float:
    """Exact-formula ``e_k(P(a, a))``, checked against the floor ``-2a``."""
    e = ek_polydisk(a, k)
    assert e >= -2 * float(as_fraction(a)), f"e_{k}(P({a},{a})) = {e} below -2a"
    return e


def basest_lower_bound(packing: CubePacking, vol, k: int) -> float:
    """``-2 sqrt(2) sum a_i + 2 (V_k - vol) sqrt(k / vol)`` over cubes with ``a_i^2 >= vol/k``."""
    if k < 1:
        raise ValueError("k must be positive")
    vol = as_fraction(vol)
    if vol <= 0:
        raise ValueError("volume must be positive")
    sa, sv = packing.sums(vol, k)
    return -2 * math.sqrt(2) * float(sa) + 2 * float(sv - vol) / math.sqrt(float(vol)) * math.sqrt(k)


def matched_level(vol, k: int) -> int:
    """``n`` with ``16^n <= k / vol < 16^(n+1)`` (0 when ``k / vol < 16``)."""
    r = Fraction(k) / as_fraction(vol)
    n = 0
    while 16 ** (n + 1) <= r:
        n += 1
    return n


@dataclass(frozen=True)
class ScanRow:
    k: int
    level: int
    bound: float
    scaled: float
    truncated: bool


def exponent_scan(oracle: MembershipOracle, vol, max_level: int, ks: Sequence[int]) -> List[ScanRow]:
    """Bound and ``bound / k^(1/4)`` for each ``k``, packing to the matched level.

    Rows whose matched level exceeds ``max_level`` are flagged as truncated.
    """
    levels = {k: matched_level(vol, k) for k in ks}
    depth = max(1, min(max_level, max(levels.values(), default=1)))
    packing = dyadic_pack(oracle, depth, keep_cells=False)
    rows = []
    for k in ks:
        n = levels[k]
        # levels finer than n never enter the bound at this k
        b = basest_lower_bound(packing, vol, k)
        rows.append(ScanRow(k, n, b, b / k**0.25, n > max_level))
    return rows
