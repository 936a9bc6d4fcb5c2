"""Error terms ``e_k = c_k - 2 sqrt(k vol)`` and related diagnostics."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .capacities import capacity_sequence
from .domains import Union, as_profile, volume
from .geometry import ToricProfile, as_fraction, region_area


def error_term(c_k, k: int, vol) -> float:
    if k < 0:
        raise ValueError("k must be nonnegative")
    vol = as_fraction(vol)
    if vol <= 0:
        raise ValueError("volume must be positive")
    return float(c_k) - 2.0 * math.sqrt(k * float(vol))


def _ball_d_array(ks: np.ndarray) -> np.ndarray:
    d = ((np.sqrt(8.0 * ks + 1) - 1) // 2).astype(np.int64)
    # float sqrt can be off by one near perfect squares
    d -= (d * d + d > 2 * ks).astype(np.int64)
    d += ((d + 1) * (d + 1) + (d + 1) <= 2 * ks).astype(np.int64)
    return d


def ball_error_terms(a, ks) -> np.ndarray:
    ks = np.asarray(ks, dtype=np.int64)
    a = float(as_fraction(a))
    return a * (_ball_d_array(ks) - np.sqrt(2.0 * ks))


def ball_oscillation(a, k_lo: int, k_hi: int) -> Tuple[float, float]:
    """Extremes of ``e_k(B(a))`` over ``k_lo <= k <= k_hi``."""
    if k_lo < 1 or k_hi < k_lo:
        raise ValueError("need 1 <= k_lo <= k_hi")
    e = ball_error_terms(a, np.arange(k_lo, k_hi + 1))
    return float(e.min()), float(e.max())


@dataclass(frozen=True)
class WindowStats:
    lo: int
    hi: int
    min: float
    max: float
    mean: float


@dataclass
class ErrorSeries:
    ks: np.ndarray
    e: np.ndarray
    vol: Fraction
    ruelle_half: Optional[float]
    window: WindowStats
    values: Optional[list] = None
    lower_bound_only: bool = False

    def __post_init__(self):
        if np.any(np.diff(self.ks) <= 0):
            raise ValueError("ks must be strictly increasing")

    @property
    def deviation(self) -> Optional[float]:
        if self.ruelle_half is None:
            return None
        return abs(self.window.mean - self.ruelle_half)


def window_stats(ks, e, lo: int, hi: int) -> WindowStats:
    ks, e = np.asarray(ks), np.asarray(e)
    mask = (ks >= lo) & (ks <= hi)
    if not mask.any():
        raise ValueError(f"window [{lo}, {hi}] is empty")
    w = e[mask]
    return WindowStats(lo, hi, float(w.min()), float(w.max()), float(w.mean()))


def ruelle_half(domain) -> Optional[float]:
    """``-Ru/2`` for single toric domains, where ``Ru = a + b``."""
    if isinstance(domain, Union):
        return None
    p = as_profile(domain)
    return -float(p.a + p.b) / 2


def error_series(domain, kmax: int, window=None, window_fraction: float = 0.5, method="auto", **opts) -> ErrorSeries:
    """e_1 .. e_kmax of ``domain`` with statistics over a window of k.

    ``window`` is an explicit ``(lo, hi)``; otherwise the top
    ``window_fraction`` of the range ``1..kmax`` is used.
    """
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    if window is None:
        if not 0 < window_fraction <= 1:
            raise ValueError("window_fraction must lie in (0, 1]")
        window = (max(1, math.ceil(kmax * (1 - window_fraction))), kmax)
    opts.setdefault("witnesses", False)
    run = capacity_sequence(domain, kmax, method, **opts)
    vol = volume(domain)
    ks = np.arange(1, kmax + 1)
    e = np.array([error_term(r.value, r.k, vol) for r in run[1:]])
    return ErrorSeries(
        ks,
        e,
        vol,
        ruelle_half(domain),
        window_stats(ks, e, *window),
        [r.value for r in run],
        any(r.lower_bound_only for r in run),
    )


def conjecture_check(domain, kmax: int, window_fraction: float = 0.5, **opts) -> ErrorSeries:
    """Error terms against the predicted limit ``-Ru/2``; reports, never asserts."""
    if kmax < 100:
        raise ValueError("kmax must be at least 100 for a meaningful window")
    return error_series(domain, kmax, window_fraction=window_fraction, **opts)


class Verdict(enum.Enum):
    OBSTRUCTED = "Obstructed"
    NOT_OBSTRUCTED = "NotObstructed"
    VOLUME_MISMATCH = "VolumeMismatch"


@dataclass(frozen=True)
class ObstructionReport:
    verdict: Verdict
    source_sum: Fraction
    target_sum: Fraction
    area_gap: Fraction
    # the caller vouches that both domains satisfy the convergence hypothesis
    hypotheses_asserted: bool = True


def embedding_obstruction(source: ToricProfile, target: ToricProfile, area_tol=0) -> ObstructionReport:
    """Necessary condition ``a + b >= a' + b'`` for a volume-filling embedding."""
    area_tol = as_fraction(area_tol)
    gap = abs(region_area(source) - region_area(target))
    s, t = source.a + source.b, target.a + target.b
    if gap > area_tol:
        verdict = Verdict.VOLUME_MISMATCH
    elif s < t:
        verdict = Verdict.OBSTRUCTED
    else:
        verdict = Verdict.NOT_OBSTRUCTED
    return ObstructionReport(verdict, s, t, gap)


def smooth_refinement(smooth, samples: Sequence[int], kmax: int, window, **opts):
    """Window means of the error term for successively finer polygons."""
    from .domains import Toric
    from .smooth import polygonalize

    out = []
    for n in samples:
        omega = polygonalize(smooth, n)
        series = error_series(Toric(omega, smooth), kmax, window=window, **opts)
        out.append((n, series))
    return out
