"""ECH index and its quadratic approximation for abstract orbit-set data.

Nothing here integrates a Reeb flow: the caller supplies, per simple orbit,
the multiplicity, action, rotation number (relative to a fixed global
trivialization), self-linking number, and pairwise linking numbers.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union as TUnion

from .geometry import as_fraction

Real = TUnion[float, Fraction]
NEAR_INTEGER = 1e-9


class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class OrbitDatum:
    m: int
    action: Real
    theta: Real
    sl: int
    hyperbolic: bool = False

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise GeneratorError("multiplicity must be a positive integer")
        if self.hyperbolic and self.m != 1:
            raise GeneratorError("hyperbolic orbits must have multiplicity 1")
        if self.action <= 0:
            raise GeneratorError("action must be positive")
        if not isinstance(self.sl, int):
            raise GeneratorError("self-linking must be an integer")
        if isinstance(self.theta, float):
            if not math.isfinite(self.theta):
                raise GeneratorError("rotation number must be finite")
            for k in range(1, self.m + 1):
                x = k * self.theta
                if x != round(x) and abs(x - round(x)) < NEAR_INTEGER:
                    warnings.warn(
                        f"{k}*theta = {x!r} is within {NEAR_INTEGER} of an integer; "
                        "floor/ceil may be unreliable, supply theta as a rational",
                        RuntimeWarning,
                        stacklevel=3,
                    )
                    break


@dataclass(frozen=True)
class EchGenerator:
    orbits: Tuple[OrbitDatum, ...]
    # linking[i][j] for i != j; diagonal entries are ignored (None in JSON)
    linking: Tuple[Tuple[Optional[int], ...], ...] = ()

    def __init__(self, orbits: Sequence[OrbitDatum], linking=None):
        orbits = tuple(orbits)
        n = len(orbits)
        if linking is None:
            linking = [[None if i == j else 0 for j in range(n)] for i in range(n)]
        rows = tuple(tuple(None if i == j else int(v) for j, v in enumerate(row)) for i, row in enumerate(linking))
        if len(rows) != n or any(len(r) != n for r in rows):
            raise GeneratorError(f"linking matrix must be {n}x{n}")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise GeneratorError(f"linking matrix not symmetric at ({i}, {j})")
        object.__setattr__(self, "orbits", orbits)
        object.__setattr__(self, "linking", rows)

    def pairs(self):
        n = len(self.orbits)
        for i in range(n):
            for j in range(n):
                if i != j:
                    yield i, j, self.linking[i][j]


def action(gen: EchGenerator):
    return sum((o.m * o.action for o in gen.orbits), 0)


def _floor_ceil(x) -> Tuple[int, int]:
    return math.floor(x), math.ceil(x)


def rotation_terms(o: OrbitDatum) -> int:
    total = 0
    for k in range(1, o.m + 1):
        lo, hi = _floor_ceil(k * o.theta)
        total += lo + hi
    return total


def ech_index(gen: EchGenerator) -> int:
    """Self-linking, linking and rotation-number terms summed; always an integer."""
    total = sum(o.m * o.m * o.sl for o in gen.orbits)
    total += sum(gen.orbits[i].m * gen.orbits[j].m * l for i, j, l in gen.pairs())
    total += sum(rotation_terms(o) for o in gen.orbits)
    return int(total)


def _f(gen: EchGenerator, i: int, j: int):
    oi, oj = gen.orbits[i], gen.orbits[j]
    if i == j:
        return (oi.sl + oi.theta) / (oi.action * oi.action)
    return gen.linking[i][j] / (oi.action * oj.action)


def approx_index(gen: EchGenerator):
    """Quadratic form in ``m_i A_i`` with the linking function, plus the rotation term."""
    n = len(gen.orbits)
    total = 0
    for i in range(n):
        oi = gen.orbits[i]
        for j in range(n):
            oj = gen.orbits[j]
            total += oi.m * oj.m * oi.action * oj.action * _f(gen, i, j)
        total += oi.m * oi.action * (oi.theta / oi.action)
    return total


def index_rewrite(gen: EchGenerator):
    """The index evaluated through the linking function and rotation densities.

    ``sum_ij m_i m_j A_i A_j f_ij - sum_i m_i^2 A_i rho_i
    + sum_i sum_k (floor(k A_i rho_i) + ceil(k A_i rho_i))`` with
    ``rho_i = theta_i / A_i``.  With rational data this equals
    ``ech_index`` exactly.
    """
    n = len(gen.orbits)
    total = 0
    for i in range(n):
        oi = gen.orbits[i]
        rho = oi.theta / oi.action
        for j in range(n):
            oj = gen.orbits[j]
            total += oi.m * oj.m * oi.action * oj.action * _f(gen, i, j)
        total -= oi.m * oi.m * oi.action * rho
        for k in range(1, oi.m + 1):
            lo, hi = _floor_ceil(k * oi.action * rho)
            total += lo + hi
    return total


@dataclass(frozen=True)
class GapReport:
    index: int
    approx: float
    gap: float
    bound: int
    ok: bool


def gap_check(gen: EchGenerator) -> GapReport:
    i = ech_index(gen)
    ap = approx_index(gen)
    gap = abs(float(ap) - i) if not isinstance(ap, Fraction) else float(abs(ap - i))
    bound = sum(o.m for o in gen.orbits)
    return GapReport(i, float(ap), gap, bound, gap <= bound)


def _number(v, exact: bool):
    if isinstance(v, str):
        return as_fraction(v) if exact else float(as_fraction(v))
    if isinstance(v, int):
        return Fraction(v) if exact else float(v)
    if isinstance(v, float):
        return as_fraction(v) if exact else v
    raise GeneratorError(f"expected a number or rational string, got {v!r}")


def generator_from_dict(data: dict, exact: bool = True) -> EchGenerator:
    """Build a generator from the JSON layout.

    Rationals may be ``"p/q"`` or decimal strings.  With ``exact`` all
    numeric data become Fractions, so floor/ceil at integers is decided
    exactly.
    """
    try:
        orbits = [
            OrbitDatum(
                m=int(o["m"]),
                action=_number(o["A"], exact),
                theta=_number(o["theta"], exact),
                sl=int(o["sl"]),
                hyperbolic=bool(o.get("hyperbolic", False)),
            )
            for o in data["orbits"]
        ]
    except (KeyError, TypeError) as exc:
        raise GeneratorError(f"malformed generator: {exc}") from None
    return EchGenerator(orbits, data.get("linking"))


def generator_to_dict(gen: EchGenerator) -> dict:
    def fmt(v):
        return str(v) if isinstance(v, Fraction) else repr(v)

    return {
        "orbits": [
            {"m": o.m, "A": fmt(o.action), "theta": fmt(o.theta), "sl": o.sl, "hyperbolic": o.hyperbolic}
            for o in gen.orbits
        ],
        "linking": [list(r) for r in gen.linking],
    }


def load_generator(path, exact: bool = True) -> EchGenerator:
    with open(path) as fh:
        return generator_from_dict(json.load(fh), exact)


def random_generator(rng, max_orbits: int = 5, max_m: int = 4, exact: bool = False, theta_range: float = 5.0) -> EchGenerator:
    """Random data in the ranges used by the property tests."""
    n = int(rng.integers(1, max_orbits + 1))
    orbits: List[OrbitDatum] = []
    for _ in range(n):
        hyper = bool(rng.random() < 0.2)
        m = 1 if hyper else int(rng.integers(1, max_m + 1))
        if exact:
            den = int(rng.integers(1, 13))
            theta = Fraction(int(rng.integers(-theta_range * den, theta_range * den + 1)), den)
            act = Fraction(int(rng.integers(1, 40)), int(rng.integers(1, 8)))
        else:
            theta = float(rng.uniform(-theta_range, theta_range))
            while any(abs(k * theta - round(k * theta)) < NEAR_INTEGER for k in range(1, m + 1)):
                theta = float(rng.uniform(-theta_range, theta_range))
            act = float(rng.uniform(0.1, 10))
        orbits.append(OrbitDatum(m, act, theta, int(rng.integers(-3, 4)), hyper))
    link = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            link[i][j] = link[j][i] = int(rng.integers(-3, 4))
    return EchGenerator(orbits, link)
