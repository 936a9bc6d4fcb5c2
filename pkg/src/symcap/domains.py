"""Domain descriptions accepted by the capacity routines."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .geometry import (
    Kind,
    ToricProfile,
    as_fraction,
    rectangle_profile,
    region_area,
    triangle_profile,
)


def _positive(value, name):
    value = as_fraction(value)
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class Ball:
    a: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _positive(self.a, "a"))


@dataclass(frozen=True)
class Ellipsoid:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _positive(self.a, "a"))
        object.__setattr__(self, "b", _positive(self.b, "b"))


@dataclass(frozen=True)
class Polydisk:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _positive(self.a, "a"))
        object.__setattr__(self, "b", _positive(self.b, "b"))


@dataclass(frozen=True)
class Toric:
    profile: ToricProfile
    # set when the polygon approximates a smooth family (see smooth.py)
    smooth: Optional[object] = None


@dataclass(frozen=True)
class Union:
    parts: Tuple[object, ...]

    def __init__(self, parts):
        parts = tuple(parts)
        if not parts:
            raise ValueError("a union needs at least one part")
        object.__setattr__(self, "parts", parts)


DOMAIN_TYPES = (Ball, Ellipsoid, Polydisk, Toric, Union)


def as_profile(domain) -> ToricProfile:
    """Moment-region profile of a single toric domain."""
    if isinstance(domain, ToricProfile):
        return domain
    if isinstance(domain, Ball):
        return triangle_profile(domain.a)
    if isinstance(domain, Ellipsoid):
        return triangle_profile(domain.a, domain.b)
    if isinstance(domain, Polydisk):
        return rectangle_profile(domain.a, domain.b)
    if isinstance(domain, Toric):
        return domain.profile
    raise TypeError(f"{type(domain).__name__} has no single toric profile")


def volume(domain) -> Fraction:
    if isinstance(domain, Union):
        return sum((volume(p) for p in domain.parts), Fraction(0))
    return region_area(as_profile(domain))


def ruelle_intercepts(domain) -> Tuple[Fraction, Fraction]:
    p = as_profile(domain)
    return p.a, p.b


def has_negative_slope(profile: ToricProfile) -> bool:
    """True when every edge of the boundary strictly descends."""
    vs = profile.vertices
    return all(q[0] > p[0] and q[1] < p[1] for p, q in zip(vs, vs[1:]))


def is_concave(domain) -> bool:
    return isinstance(domain, (Ball, Ellipsoid)) or (
        isinstance(domain, Toric) and domain.profile.kind is Kind.CONCAVE
    )
