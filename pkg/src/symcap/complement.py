"""Capacities of convex toric domains from the complement in a ball.

A convex region sits inside the smallest standard triangle containing it;
what is left over are at most two pieces which, after an integral affine
change of coordinates, are concave regions.  Capacities of the convex
domain are then a min over how many extra generators the pieces absorb.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .capacities import (
    BallUnionTable,
    CapacityResult,
    Method,
    _ball_d,
    ck_concave_weights,
    exact_through,
)
from .geometry import Kind, ToricProfile
from .weights import weight_expansion


@dataclass(frozen=True)
class ComplementPieces:
    size: Fraction
    left: Optional[ToricProfile]
    right: Optional[ToricProfile]


def complement_pieces(omega: ToricProfile) -> ComplementPieces:
    """Smallest enclosing triangle and the two concave leftover pieces."""
    if omega.kind is not Kind.CONVEX:
        raise ValueError("complement pieces need a convex profile")
    verts = omega.vertices
    c = max(x + y for x, y in verts)
    contact = [i for i, (x, y) in enumerate(verts) if x + y == c]
    i1, i2 = contact[0], contact[-1]
    left = right = None
    if omega.b < c:
        pts = [(c - x - y, x) for x, y in verts[: i1 + 1]]
        left = ToricProfile(Kind.CONCAVE, pts[::-1])
    if omega.a < c:
        pts = [(y, c - x - y) for x, y in verts[i2:]]
        right = ToricProfile(Kind.CONCAVE, pts[::-1])
    return ComplementPieces(c, left, right)


def _piece_table(piece, n, den, expansion_opts):
    """Scaled integer capacities c_0..c_n of a piece; zeros for an empty piece."""
    if piece is None:
        return np.zeros(1, dtype=np.int64), False
    exp = weight_expansion(piece, **expansion_opts)
    table = BallUnionTable(exp.weights, n)
    vals = np.array([int(table.value(j) * den) for j in range(n + 1)], dtype=np.int64)
    return vals, not exact_through(exp, n)


def _solve(pieces, den, kmax, slack, expansion_opts):
    left, lt = _piece_table(pieces.left, slack, den, expansion_opts)
    right, rt = _piece_table(pieces.right, slack, den, expansion_opts)
    size = int(pieces.size * den)
    top = kmax + len(left) + len(right)
    ball = np.array([_ball_d(j) * size for j in range(top + 1)], dtype=np.int64)
    grid = np.add.outer(np.arange(len(left)), np.arange(len(right)))
    cost = left[:, None] + right[None, :]
    out = []
    for k in range(kmax + 1):
        m = ball[grid + k] - cost
        i = int(np.argmin(m))
        k1, k2 = divmod(i, m.shape[1])
        out.append((int(m.flat[i]), k1, k2))
    return out, (lt or rt)


def _interior(k1, k2, slack, pieces):
    return (pieces.left is None or k1 < slack) and (pieces.right is None or k2 < slack)


def _complement_table(omega, kmax, slack=None, **expansion_opts):
    pieces = complement_pieces(omega)
    den = omega.denominator()
    if slack is not None:
        res, approx = _solve(pieces, den, kmax, slack, expansion_opts)
        return pieces, den, res, approx
    slack = max(kmax, 2)
    prev = None
    streak = 0
    while True:
        res, approx = _solve(pieces, den, kmax, slack, expansion_opts)
        inside = all(_interior(k1, k2, slack, pieces) for _, k1, k2 in res)
        same = prev is not None and [v for v, _, _ in res] == [v for v, _, _ in prev]
        streak = streak + 1 if inside and (prev is None or same) else 0
        if streak >= 2:
            return pieces, den, res, approx
        prev = res
        slack *= 2


def convex_complement_sequence(omega: ToricProfile, kmax: int, slack=None, **expansion_opts) -> List[CapacityResult]:
    """c_0 .. c_kmax of a convex toric domain by the complement formula.

    Without an explicit ``slack`` the search box for the extra generators
    starts at ``max(kmax, 2)`` and doubles until the minimiser sits strictly
    inside the box on two consecutive sizes with the same values.
    """
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    _, den, res, approx = _complement_table(omega, kmax, slack, **expansion_opts)
    return [
        CapacityResult(k, Fraction(v, den), Method.COMPLEMENT, (k1, k2), approximate=approx)
        for k, (v, k1, k2) in enumerate(res)
    ]


def ck_convex_complement(omega: ToricProfile, k: int, slack=None, **expansion_opts) -> CapacityResult:
    return convex_complement_sequence(omega, k, slack, **expansion_opts)[k]


def complement_identity_terms(omega: ToricProfile, k: int, witness: Tuple[int, int]):
    """The three terms of the minimising combination, for inspection."""
    pieces = complement_pieces(omega)
    k1, k2 = witness
    ball = _ball_d(k + k1 + k2) * pieces.size
    left = ck_concave_weights(pieces.left, k1).value if pieces.left is not None and k1 else Fraction(0)
    right = ck_concave_weights(pieces.right, k2).value if pieces.right is not None and k2 else Fraction(0)
    return ball, left, right
