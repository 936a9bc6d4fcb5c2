"""Weight expansion of a concave toric domain.

The region under a convex graph is cut into the largest inscribed standard
triangle plus two leftover pieces, each of which is carried back to a
concave region by an integral affine map and decomposed again.  The sizes
of the triangles are the weights.

Vertices of a rational profile all live in ``(1/D) Z^2`` for the common
denominator ``D``, and the affine maps used here preserve that lattice, so
the recursion runs on integer coordinates.  It also means every weight is a
positive multiple of ``1/D``, so the recursion always terminates; the
term budget only protects against expansions that are finite but huge.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .geometry import Kind, ToricProfile, affine_length, as_fraction, region_area

DEFAULT_MAX_TERMS = 4096
DEFAULT_MIN_WEIGHT_EXPONENT = 20


@dataclass(frozen=True)
class WeightExpansion:
    weights: Tuple[Fraction, ...]
    remainder_area: Fraction = Fraction(0)
    truncated: bool = False

    def __post_init__(self):
        ws = self.weights
        if any(w <= 0 for w in ws):
            raise ValueError("weights must be positive")
        if any(x < y for x, y in zip(ws, ws[1:])):
            raise ValueError("weights must be nonincreasing")
        if self.remainder_area < 0:
            raise ValueError("negative remainder area")

    def __len__(self):
        return len(self.weights)

    def covered_area(self) -> Fraction:
        return sum((w * w for w in self.weights), Fraction(0)) / 2


def _require_concave(omega: ToricProfile):
    if omega.kind is not Kind.CONCAVE:
        raise ValueError("weight expansions are defined for concave profiles")


def inscribed_triangle_size(omega: ToricProfile) -> Fraction:
    """Largest ``c`` with the standard triangle of size ``c`` inside the region."""
    _require_concave(omega)
    return min(x + y for x, y in omega.vertices)


# ---------------------------------------------------------------------------
# integer-coordinate kernel

def _area2(verts) -> int:
    """Twice the area of the region under an integer polyline."""
    s = 0
    for (x1, y1), (x2, y2) in zip(verts, verts[1:]):
        s += (x2 - x1) * (y1 + y2)
    return s


def _split(verts, c):
    """Children of a node, as integer vertex lists (or None when empty)."""
    contact = [x for x, y in verts if x + y == c]
    t1, t2 = contact[0], contact[-1]
    left = right = None
    if t1 > 0:
        left = [(x, x + y - c) for x, y in verts if x <= t1]
        if _area2(left) == 0:
            left = None
    if verts[-1][0] > t2:
        right = [(x + y - c, y) for x, y in verts if x >= t2]
        if _area2(right) == 0:
            right = None
    return left, right


def _scaled_vertices(omega: ToricProfile):
    den = omega.denominator()
    return den, [(int(x * den), int(y * den)) for x, y in omega.vertices]


def _profile(verts, den) -> ToricProfile:
    return ToricProfile(Kind.CONCAVE, [(Fraction(x, den), Fraction(y, den)) for x, y in verts])


def split(omega: ToricProfile, c) -> Tuple[Optional[ToricProfile], Optional[ToricProfile]]:
    """The two leftover pieces after removing the inscribed triangle of size ``c``.

    Each piece is returned already mapped back to a concave profile, or
    ``None`` when it is empty.
    """
    c = as_fraction(c)
    if c != inscribed_triangle_size(omega):
        raise ValueError(f"{c} is not the inscribed triangle size")
    den, verts = _scaled_vertices(omega)
    left, right = _split(verts, int(c * den))
    return (
        None if left is None else _profile(left, den),
        None if right is None else _profile(right, den),
    )


def weight_expansion(
    omega: ToricProfile,
    min_weight=None,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> WeightExpansion:
    """Harvest inscribed triangles largest first.

    Pieces whose inscribed size falls below ``min_weight``, or that are still
    pending once ``max_terms`` weights have been collected, are not expanded;
    their area goes into ``remainder_area``.
    """
    _require_concave(omega)
    if max_terms < 1:
        raise ValueError("max_terms must be at least 1")
    if min_weight is None:
        min_weight = omega.a / 2**DEFAULT_MIN_WEIGHT_EXPONENT
    min_weight = as_fraction(min_weight)
    if min_weight < 0:
        raise ValueError("min_weight must be nonnegative")

    den, root = _scaled_vertices(omega)
    floor = min_weight * den
    counter = itertools.count()
    size = lambda vs: min(x + y for x, y in vs)  # noqa: E731
    heap = [(-size(root), next(counter), root)]
    harvested: List[int] = []
    leftover2 = 0
    while heap:
        neg_c, _, verts = heapq.heappop(heap)
        c = -neg_c
        if c < floor or len(harvested) >= max_terms:
            leftover2 += _area2(verts) + sum(_area2(vs) for _, _, vs in heap)
            break
        harvested.append(c)
        for child in _split(verts, c):
            if child is None:
                continue
            cc = size(child)
            assert cc <= c, "child triangle larger than parent"
            heapq.heappush(heap, (-cc, next(counter), child))

    weights = tuple(Fraction(c, den) for c in harvested)
    remainder = Fraction(leftover2, 2 * den * den)
    return WeightExpansion(weights, remainder, truncated=bool(leftover2))


def weight_sum(expansion: WeightExpansion) -> Fraction:
    return sum(expansion.weights, Fraction(0))


def mcduff_check(omega: ToricProfile, expansion: Optional[WeightExpansion] = None):
    """Compare the weight sum with ``a + b - affine length of the boundary``.

    Returns ``(weight_sum, a + b - length, equal)``; ``equal`` is ``None`` for
    truncated expansions, where the identity need not hold.
    """
    if expansion is None:
        expansion = weight_expansion(omega)
    lhs = weight_sum(expansion)
    rhs = omega.a + omega.b - affine_length(omega.vertices)
    return lhs, rhs, (None if expansion.truncated else lhs == rhs)


def area_identity_holds(omega: ToricProfile, expansion: WeightExpansion) -> bool:
    return expansion.covered_area() + expansion.remainder_area == region_area(omega)


def ellipsoid_weights(a, b) -> Sequence[Fraction]:
    """Weights of ``E(a, b)``; the triangle recursion is Euclid's algorithm."""
    a, b = as_fraction(a), as_fraction(b)
    out = []
    while a > 0 and b > 0:
        if a < b:
            a, b = b, a
        q = a // b
        out.extend([b] * int(q))
        a -= q * b
    return out
