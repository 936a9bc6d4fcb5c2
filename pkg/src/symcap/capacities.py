"""ECH capacities: closed forms, ball packings and dispatch over domains."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Union as TUnion

import numpy as np

from .domains import Ball, Ellipsoid, Polydisk, Toric, Union
from .geometry import Kind, ToricProfile, as_fraction, rectangle_profile, triangle_profile
from .weights import DEFAULT_MAX_TERMS, WeightExpansion, weight_expansion


class Method(enum.Enum):
    BALL_CLOSED_FORM = "BallClosedForm"
    POLYDISK_CLOSED_FORM = "PolydiskClosedForm"
    WEIGHT_DP = "WeightDP"
    CONVEX_PATH_MIN = "ConvexPathMin"
    CONCAVE_PATH_MAX = "ConcavePathMax"
    COMPLEMENT = "Complement"
    UNION_DP = "UnionDP"


class MethodMismatch(ValueError):
    """The requested method does not apply to the given domain."""


@dataclass(frozen=True)
class CapacityResult:
    k: int
    value: Fraction
    method: Method
    witness: Optional[object] = None
    lower_bound_only: bool = False
    # set by the complement route when a piece's expansion was truncated
    approximate: bool = False

    def __post_init__(self):
        if self.value < 0 or (self.value == 0) != (self.k == 0):
            raise ValueError(f"c_{self.k} = {self.value} violates 0 = c_0 < c_1")


def _ball_d(k: int) -> int:
    """Unique d >= 0 with d^2 + d <= 2k <= d^2 + 3d."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return (math.isqrt(8 * k + 1) - 1) // 2


def ck_ball(a, k: int) -> Fraction:
    return _ball_d(k) * as_fraction(a)


def ck_polydisk(a, b, k: int) -> Fraction:
    a, b = as_fraction(a), as_fraction(b)
    if k < 0:
        raise ValueError("k must be nonnegative")
    best = None
    for m in range(k + 1):
        n = -(-(k + 1) // (m + 1)) - 1
        v = a * m + b * n
        if best is None or v < best:
            best = v
    return best


def ck_ellipsoid_oracle(a, b, k: int) -> Fraction:
    """(k+1)-th smallest element of ``{am + bn}``, by direct enumeration."""
    a, b = as_fraction(a), as_fraction(b)
    vals = sorted(a * m + b * n for m in range(k + 1) for n in range(k + 1))
    return vals[k]


# ---------------------------------------------------------------------------
# disjoint unions of balls

def _common_scale(values: Sequence[Fraction]):
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return den, [int(v * den) for v in values]


class BallUnionTable:
    """Knapsack over ball multiplicities for every budget up to ``2 * kmax``.

    Item ``i`` chosen with multiplicity ``d`` costs ``d^2 + d`` and is worth
    ``d * a_i``.  Weights are scaled to integers so the table is exact.
    """

    def __init__(self, weights: Sequence, kmax: int):
        ws = sorted((as_fraction(w) for w in weights), reverse=True)
        ws = ws[: max(kmax, 0)]
        self.kmax = kmax
        self.weights = ws
        budget = 2 * kmax
        self.den, vals = _common_scale(ws) if ws else (1, [])
        big = (max(vals) if vals else 0) * (budget + 1)
        dtype = np.int64 if big < 2**62 else object
        dp = np.zeros(budget + 1, dtype=dtype)
        self.choices: List[np.ndarray] = []
        for v in vals:
            new = dp.copy()
            pick = np.zeros(budget + 1, dtype=np.int16)
            d = 1
            while d * d + d <= budget:
                cost = d * d + d
                cand = dp[: budget + 1 - cost] + v * d
                tail = new[cost:]
                better = cand > tail
                tail[better] = cand[better]
                pick[cost:][better] = d
                d += 1
            dp = new
            self.choices.append(pick)
        self.table = dp

    def value(self, k: int) -> Fraction:
        if k > self.kmax:
            raise ValueError(f"table only covers k <= {self.kmax}")
        return Fraction(int(self.table[2 * k]), self.den)

    def multiplicities(self, k: int) -> tuple:
        b = 2 * k
        out = [0] * len(self.choices)
        for i in range(len(self.choices) - 1, -1, -1):
            d = int(self.choices[i][b])
            out[i] = d
            b -= d * d + d
        return tuple(out)


def _as_expansion(weights) -> WeightExpansion:
    if isinstance(weights, WeightExpansion):
        return weights
    return WeightExpansion(tuple(sorted((as_fraction(w) for w in weights), reverse=True)))


def exact_through(exp: WeightExpansion, k: int) -> bool:
    """Whether c_k computed from ``exp`` is exact.

    Only the k largest weights can carry a positive multiplicity, and a
    truncated expansion still holds the largest weights (they are harvested
    in nonincreasing order), so truncation matters only when fewer than k
    weights were collected.
    """
    return not exp.truncated or len(exp.weights) >= k


def ck_ball_union(weights, k: int) -> CapacityResult:
    """c_k of a disjoint union of balls, with the optimal multiplicities."""
    exp = _as_expansion(weights)
    table = BallUnionTable(exp.weights, k)
    return CapacityResult(
        k, table.value(k), Method.WEIGHT_DP, table.multiplicities(k), not exact_through(exp, k)
    )


def ball_union_sequence(weights, kmax: int, witnesses: bool = True) -> List[CapacityResult]:
    exp = _as_expansion(weights)
    table = BallUnionTable(exp.weights, kmax)
    return [
        CapacityResult(
            k,
            table.value(k),
            Method.WEIGHT_DP,
            table.multiplicities(k) if witnesses else None,
            not exact_through(exp, k),
        )
        for k in range(kmax + 1)
    ]


Evaluator = TUnion[Sequence, Callable[[int], Fraction]]


def _union_tables(parts: Sequence[Evaluator], k: int) -> List[Fraction]:
    best = None
    for part in parts:
        seq = [part(j) for j in range(k + 1)] if callable(part) else list(part)[: k + 1]
        if len(seq) < k + 1:
            raise ValueError(f"part supplies only {len(seq)} capacities, need {k + 1}")
        if best is None:
            best = seq
            continue
        best = [max(best[i] + seq[j - i] for i in range(j + 1)) for j in range(k + 1)]
    return best


def ck_union(parts: Sequence[Evaluator], k: int) -> Fraction:
    """Max over splittings ``k = k_1 + ... + k_n`` of the summed part capacities."""
    if not parts:
        raise ValueError("need at least one part")
    return _union_tables(parts, k)[k]


# ---------------------------------------------------------------------------
# concave toric domains through the weight expansion

def ck_concave_weights(omega: ToricProfile, k: int, **expansion_opts) -> CapacityResult:
    if omega.kind is not Kind.CONCAVE:
        raise ValueError("weight route needs a concave profile")
    return ck_ball_union(weight_expansion(omega, **expansion_opts), k)


def concave_weights_sequence(
    omega: ToricProfile, kmax: int, witnesses: bool = True, **expansion_opts
) -> List[CapacityResult]:
    if omega.kind is not Kind.CONCAVE:
        raise ValueError("weight route needs a concave profile")
    if "max_terms" not in expansion_opts:
        # c_k only looks at the k largest weights
        expansion_opts["max_terms"] = max(kmax, DEFAULT_MAX_TERMS)
    return ball_union_sequence(weight_expansion(omega, **expansion_opts), kmax, witnesses)


def ck_ellipsoid(a, b, k: int) -> Fraction:
    return ck_concave_weights(triangle_profile(a, b), k).value


# ---------------------------------------------------------------------------
# dispatch

METHODS = ("auto", "closed", "weights", "path", "complement", "union")


def _closed(fn, method, kmax):
    return [CapacityResult(k, fn(k), method) for k in range(kmax + 1)]


def capacity_sequence(domain, kmax: int, method: str = "auto", **opts) -> List[CapacityResult]:
    """c_0 .. c_kmax of ``domain``.

    ``auto`` prefers a closed form, then the weight expansion, then lattice
    paths: balls and polydisks use their closed forms, concave toric domains
    and ellipsoids the weights, convex toric domains the path minimum, and
    unions combine their parts' automatic sequences.  ``workers`` evaluates
    union parts on a thread pool; results are merged in part order.
    """
    from .complement import convex_complement_sequence
    from .paths import concave_path_sequence, convex_path_sequence

    workers = opts.pop("workers", None)
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    if method not in METHODS:
        raise MethodMismatch(f"unknown method {method!r}")
    mismatch = MethodMismatch(f"method {method!r} does not apply to {type(domain).__name__}")

    if isinstance(domain, Union):
        if method not in ("auto", "union"):
            raise mismatch
        def run(part):
            return capacity_sequence(part, kmax, "auto", **opts)

        if workers and workers > 1 and len(domain.parts) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                runs = list(pool.map(run, domain.parts))
        else:
            runs = [run(p) for p in domain.parts]
        lower = any(r.lower_bound_only for run in runs for r in run)
        vals = _union_tables([[r.value for r in run] for run in runs], kmax)
        out = [CapacityResult(k, vals[k], Method.UNION_DP, lower_bound_only=lower) for k in range(kmax + 1)]
    elif isinstance(domain, Ball):
        tri = triangle_profile(domain.a)
        if method in ("auto", "closed"):
            out = _closed(lambda k: ck_ball(domain.a, k), Method.BALL_CLOSED_FORM, kmax)
        elif method == "weights":
            out = concave_weights_sequence(tri, kmax, **opts)
        elif method == "path":
            out = concave_path_sequence(tri, kmax)
        elif method == "complement":
            out = convex_complement_sequence(tri.with_kind(Kind.CONVEX), kmax)
        else:
            raise mismatch
    elif isinstance(domain, Polydisk):
        if method in ("auto", "closed"):
            out = _closed(lambda k: ck_polydisk(domain.a, domain.b, k), Method.POLYDISK_CLOSED_FORM, kmax)
        elif method == "path":
            out = convex_path_sequence(rectangle_profile(domain.a, domain.b), kmax)
        elif method == "complement":
            out = convex_complement_sequence(rectangle_profile(domain.a, domain.b), kmax)
        else:
            raise mismatch
    elif isinstance(domain, (Ellipsoid, Toric)):
        if isinstance(domain, Ellipsoid):
            prof = triangle_profile(domain.a, domain.b)
        else:
            prof = domain.profile
        if prof.kind is Kind.CONCAVE:
            if method in ("auto", "weights"):
                out = concave_weights_sequence(prof, kmax, **opts)
            elif method == "path":
                out = concave_path_sequence(prof, kmax)
            else:
                raise mismatch
        else:
            if method in ("auto", "path"):
                out = convex_path_sequence(prof, kmax)
            elif method == "complement":
                out = convex_complement_sequence(prof, kmax)
            else:
                raise mismatch
    else:
        raise TypeError(f"unsupported domain {domain!r}")

    vals = [r.value for r in out]
    assert all(x <= y for x, y in zip(vals, vals[1:])), "capacities must be nondecreasing"
    return out
