"""JSON domain specifications and output formatting."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .domains import Ball, Ellipsoid, Polydisk, Toric, Union
from .geometry import Kind, ProfileError, ToricProfile, as_fraction
from .smooth import Family, SmoothProfile, polygonalize


class SpecError(ValueError):
    """A domain specification could not be turned into a domain."""


class Box:
    """Axis-aligned box in R^4; only meaningful for cube packings."""

    def __init__(self, lo, hi):
        self.lo = [as_fraction(v) for v in (lo if isinstance(lo, list) else [lo] * 4)]
        self.hi = [as_fraction(v) for v in (hi if isinstance(hi, list) else [hi] * 4)]
        if len(self.lo) != 4 or len(self.hi) != 4 or any(h <= l for l, h in zip(self.lo, self.hi)):
            raise SpecError("box needs four coordinates with lo < hi")

    @property
    def volume(self) -> Fraction:
        v = Fraction(1)
        for l, h in zip(self.lo, self.hi):
            v *= h - l
        return v


def _rat(obj: dict, key: str):
    if key not in obj:
        raise SpecError(f"missing field {key!r}")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (str, int, float)):
        raise SpecError(f"field {key!r} must be a number or rational string")
    try:
        return as_fraction(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"field {key!r}: {exc}") from None


def parse_domain(obj: Any):
    if not isinstance(obj, dict) or "type" not in obj:
        raise SpecError("domain spec must be an object with a 'type'")
    kind = obj["type"]
    try:
        if kind == "ball":
            return Ball(_rat(obj, "a"))
        if kind == "ellipsoid":
            return Ellipsoid(_rat(obj, "a"), _rat(obj, "b"))
        if kind == "polydisk":
            return Polydisk(_rat(obj, "a"), _rat(obj, "b"))
        if kind == "toric":
            verts = obj.get("vertices")
            if not isinstance(verts, list):
                raise SpecError("toric spec needs a vertex list")
            pts = [(as_fraction(x), as_fraction(y)) for x, y in verts]
            return Toric(ToricProfile(Kind(obj.get("kind", "concave")), pts))
        if kind == "profile":
            return _parse_profile(obj)
        if kind == "union":
            parts = obj.get("parts")
            if not isinstance(parts, list) or not parts:
                raise SpecError("union spec needs a nonempty 'parts' list")
            return Union([parse_domain(p) for p in parts])
        if kind == "box":
            return Box(obj.get("lo", 0), obj.get("hi", 1))
    except SpecError:
        raise
    except (ProfileError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise SpecError(f"invalid {kind} spec: {exc}") from None
    raise SpecError(f"unknown domain type {kind!r}")


def _parse_profile(obj: dict) -> Toric:
    family = Family(obj.get("family", "power"))
    side = Kind(obj.get("kind", "concave"))
    if family is Family.PARAMETRIC:
        smooth = SmoothProfile.parametric(obj["curve"], side)
    elif family is Family.LINE:
        smooth = SmoothProfile.line(float(_rat(obj, "a")), float(_rat(obj, "b")))
    else:
        smooth = SmoothProfile.power(float(_rat(obj, "a")), float(_rat(obj, "b")), float(_rat(obj, "p")), side)
    n = int(obj.get("samples", 256))
    den = int(obj.get("denominator", 2**20))
    return Toric(polygonalize(smooth, n, den), smooth)


def load_domain(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read {path}: {exc}") from None
    return parse_domain(data)


def fmt_exact(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def fmt_float(x) -> str:
    return f"{float(x):.17g}"
