"""Exact piecewise-linear homeomorphisms of [0, 1] and of the circle R/Z.

Conventions (used by every other module):

* maps act on the right: ``evaluate(g, x)`` is x·g;
* ``compose(f, g)`` applies f first, then g, so x·(fg) = (x·f)·g;
* ``conjugate(g, h)`` is g^h = h⁻¹ g h, hence Supp(g^h) = Supp(g)·h.

A :class:`PLMap` is stored as its breakpoint table from (0, 0) to (1, 1).  A
:class:`CircleMap` is stored as the table of a lift on [0, 1], starting at
(0, y0) with 0 <= y0 < 1 and ending at (1, y0 + 1).  Tables are always kept in
canonical form (slope-redundant interior breakpoints removed), so equality of
elements is equality of tables.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence, Union

from thompson.exactnum import (
    ONE,
    ZERO,
    CarrierMismatch,
    ClosedSet,
    IntervalSet,
    RationalLike,
    _from_predicate,
    circle_point,
    format_rat,
    is_dyadic,
    is_power_of_two,
    log2_exact,
    rat,
)

Point = tuple[Fraction, Fraction]


def _canonical(points: Sequence[Point]) -> tuple[Point, ...]:
    out = [points[0]]
    for i in range(1, len(points) - 1):
        (x0, y0), (x1, y1), (x2, y2) = out[-1], points[i], points[i + 1]
        # drop (x1, y1) when both neighbouring slopes agree
        if (y1 - y0) * (x2 - x1) != (y2 - y1) * (x1 - x0):
            out.append(points[i])
    out.append(points[-1])
    return tuple(out)


class _PL:
    """Shared machinery for interval maps and circle lifts."""

    breakpoints: tuple[Point, ...]
    carrier: str

    def __post_init__(self):
        pts = tuple((rat(x), rat(y)) for x, y in self.breakpoints)
        if len(pts) < 2:
            raise ValueError("a breakpoint table needs at least two points")
        for (xa, ya), (xb, yb) in zip(pts, pts[1:]):
            if not xa < xb:
                raise ValueError("x-coordinates must be strictly increasing")
            if not ya < yb:
                raise ValueError("map is not orientation-preserving (y not increasing)")
        self._check_ends(pts)
        object.__setattr__(self, "breakpoints", _canonical(pts))

    @cached_property
    def xs(self) -> tuple[Fraction, ...]:
        return tuple(x for x, _ in self.breakpoints)

    @cached_property
    def ys(self) -> tuple[Fraction, ...]:
        return tuple(y for _, y in self.breakpoints)

    def slopes(self) -> list[Fraction]:
        return [(yb - ya) / (xb - xa)
                for (xa, ya), (xb, yb) in zip(self.breakpoints, self.breakpoints[1:])]

    def pieces(self) -> Iterable[tuple[Fraction, Fraction, Fraction, Fraction]]:
        """Yield (x_lo, x_hi, slope, intercept) for every affine piece of the table."""
        for (xa, ya), (xb, yb) in zip(self.breakpoints, self.breakpoints[1:]):
            lam = (yb - ya) / (xb - xa)
            yield xa, xb, lam, ya - lam * xa

    def _table(self, x: Fraction) -> Fraction:
        """Value of the table at x in [0, 1]."""
        xs = self.xs
        i = min(bisect_right(xs, x), len(xs) - 1)
        (xa, ya), (xb, yb) = self.breakpoints[i - 1], self.breakpoints[i]
        return ya + (yb - ya) * (x - xa) / (xb - xa)

    def _table_inv(self, y: Fraction) -> Fraction:
        ys = self.ys
        i = min(bisect_right(ys, y), len(ys) - 1)
        (xa, ya), (xb, yb) = self.breakpoints[i - 1], self.breakpoints[i]
        return xa + (xb - xa) * (y - ya) / (yb - ya)

    def is_identity(self) -> bool:
        return self.breakpoints == ((ZERO, ZERO), (ONE, ONE))

    def to_json(self) -> dict:
        return {"carrier": self.carrier,
                "breakpoints": [[format_rat(x), format_rat(y)] for x, y in self.breakpoints]}

    def __str__(self) -> str:
        body = ",".join(f"({format_rat(x)},{format_rat(y)})" for x, y in self.breakpoints)
        return f"{self._literal}{{{body}}}"


@dataclass(frozen=True, eq=True)
class PLMap(_PL):
    """Orientation-preserving PL homeomorphism of [0, 1]."""

    breakpoints: tuple[Point, ...]
    carrier = "interval"
    _literal = "pl"

    @staticmethod
    def _check_ends(pts):
        if pts[0] != (0, 0) or pts[-1] != (1, 1):
            raise ValueError("an interval map must run from (0, 0) to (1, 1)")

    @classmethod
    def identity(cls) -> "PLMap":
        return cls(((ZERO, ZERO), (ONE, ONE)))

    def __call__(self, x: RationalLike) -> Fraction:
        x = rat(x)
        if not 0 <= x <= 1:
            raise ValueError(f"{x} is outside [0, 1]")
        return self._table(x)

    def inverse_value(self, y: Fraction) -> Fraction:
        return self._table_inv(y)

    def to_circle(self) -> "CircleMap":
        return CircleMap(self.breakpoints)


@dataclass(frozen=True, eq=True)
class CircleMap(_PL):
    """Orientation-preserving PL homeomorphism of R/Z, stored via a lift on [0, 1]."""

    breakpoints: tuple[Point, ...]
    carrier = "circle"
    _literal = "circ"

    @staticmethod
    def _check_ends(pts):
        (x0, y0), (x1, y1) = pts[0], pts[-1]
        if x0 != 0 or x1 != 1:
            raise ValueError("a circle lift is tabulated on [0, 1]")
        if not 0 <= y0 < 1 or y1 != y0 + 1:
            raise ValueError("a circle lift must start in [0, 1) and have degree 1")

    @classmethod
    def identity(cls) -> "CircleMap":
        return cls(((ZERO, ZERO), (ONE, ONE)))

    @property
    def base(self) -> Fraction:
        """Image of 0."""
        return self.breakpoints[0][1]

    def lift(self, x: RationalLike) -> Fraction:
        """The lift extended to all of R by lift(x + 1) = lift(x) + 1."""
        x = rat(x)
        n = math.floor(x)
        return self._table(x - n) + n

    def lift_inverse(self, y: RationalLike) -> Fraction:
        y = rat(y)
        n = math.floor(y - self.base)
        return self._table_inv(y - n) + n

    def __call__(self, x: RationalLike) -> Fraction:
        return circle_point(self.lift(circle_point(x)))

    def inverse_value(self, y: Fraction) -> Fraction:
        return circle_point(self.lift_inverse(circle_point(y)))

    def fixes_zero(self) -> bool:
        return self.base == 0

    def to_interval(self) -> PLMap:
        if not self.fixes_zero():
            raise CarrierMismatch("a circle map moving 0 has no interval form")
        return PLMap(self.breakpoints)


Element = Union[PLMap, CircleMap]


@dataclass(frozen=True)
class Germ:
    """f(x) = 2**n · x on [0, delta], with delta the first breakpoint."""

    n: int
    delta: Fraction


def _check_same(f: Element, g: Element) -> None:
    if type(f) is not type(g):
        raise CarrierMismatch(f"carrier mismatch: {f.carrier} vs {g.carrier}")


def _build(kind: type, cuts: Iterable[Fraction], fn: Callable[[Fraction], Fraction]) -> Element:
    xs = sorted({c for c in cuts if 0 <= c <= 1} | {ZERO, ONE})
    ys = [fn(x) for x in xs]
    if kind is CircleMap:
        shift = math.floor(ys[0])
        ys = [y - shift for y in ys]
    return kind(tuple(zip(xs, ys)))


def compose(f: Element, g: Element) -> Element:
    """Apply f, then g."""
    _check_same(f, g)
    if isinstance(f, PLMap):
        cuts = list(f.xs) + [f.inverse_value(t) for t in g.xs]
        return _build(PLMap, cuts, lambda x: g._table(f._table(x)))
    lo, hi = f.ys[0], f.ys[-1]
    cuts = list(f.xs)
    for t in g.xs:
        for n in (-1, 0, 1, 2):
            if lo <= t + n <= hi:
                cuts.append(f._table_inv(t + n))
    return _build(CircleMap, cuts, lambda x: g.lift(f._table(x)))


def invert(f: Element) -> Element:
    if isinstance(f, PLMap):
        return PLMap(tuple((y, x) for x, y in f.breakpoints))
    cuts = [circle_point(y) for y in f.ys]
    return _build(CircleMap, cuts, f.lift_inverse)


def power(f: Element, n: int) -> Element:
    if n < 0:
        return power(invert(f), -n)
    result = type(f).identity()
    base = f
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def conjugate(g: Element, h: Element) -> Element:
    """g^h = h⁻¹ g h."""
    _check_same(g, h)
    return compose(compose(invert(h), g), h)


def commutator(g: Element, h: Element) -> Element:
    """[g, h] = g⁻¹ h⁻¹ g h."""
    return compose(compose(invert(g), invert(h)), compose(g, h))


def evaluate(f: Element, q: RationalLike) -> Fraction:
    return f(q)


def _displacement(f: Element, x: Fraction) -> Fraction:
    if isinstance(f, PLMap):
        return f._table(x) - x
    return f.lift(x) - x


def _fixed_candidates(f: Element) -> list[Fraction]:
    """Breakpoints plus every isolated fixed point found by solving λx + μ = x + m per piece."""
    cuts = list(f.xs)
    for lo, hi, lam, mu in f.pieces():
        if lam == 1:
            continue
        d_lo, d_hi = lam * lo + mu - lo, lam * hi + mu - hi
        ms = [0] if isinstance(f, PLMap) else range(
            math.ceil(min(d_lo, d_hi)), math.floor(max(d_lo, d_hi)) + 1)
        for m in ms:
            x = (m - mu) / (lam - 1)
            if lo <= x <= hi:
                cuts.append(x)
    return cuts


def support(f: Element) -> IntervalSet:
    """Exact open set of points moved by f."""
    def moved(x):
        d = _displacement(f, x)
        return d.denominator != 1 if isinstance(f, CircleMap) else d != 0

    if isinstance(f, PLMap):
        return _from_predicate("interval", _fixed_candidates(f),
                               lambda x: 0 < x < 1 and moved(x))
    return _from_predicate("circle", _fixed_candidates(f), moved)


def fixed_set(f: Element) -> ClosedSet:
    return support(f).complement()


def germ_at_zero(f: Element) -> Germ:
    if isinstance(f, CircleMap):
        f = f.to_interval()
    lam = f.slopes()[0]
    if not is_power_of_two(lam):
        raise ValueError(f"initial slope {lam} is not a power of 2")
    return Germ(log2_exact(lam), f.xs[1])


def restriction_equals(f: Element, g: Element, lo: RationalLike, hi: RationalLike) -> bool:
    """True iff f and g agree as functions on the closed interval [lo, hi]."""
    _check_same(f, g)
    lo, hi = rat(lo), rat(hi)
    cuts = sorted({lo, hi} | {x for x in f.xs + g.xs if lo < x < hi})
    probes = cuts + [(a + b) / 2 for a, b in zip(cuts, cuts[1:])]
    return all(f(x) == g(x) for x in probes)


def validate(g: Element, kind: str) -> str | None:
    """Return None if g is an element of ``kind`` ("F" or "T"), else the first violated clause."""
    if kind not in ("F", "T"):
        raise ValueError(f"unknown group {kind!r}")
    for (xa, ya), (xb, yb) in zip(g.breakpoints, g.breakpoints[1:]):
        if not (xa < xb and ya < yb):
            return "not orientation-preserving"
    for x, y in g.breakpoints:
        if not is_dyadic(x):
            return f"breakpoint {format_rat(x)} not dyadic"
        if not is_dyadic(y):
            return f"image {format_rat(y)} of breakpoint not dyadic"
    for lam in g.slopes():
        if not is_power_of_two(lam):
            return "slope not a power of 2"
    if kind == "F" and isinstance(g, CircleMap) and not g.fixes_zero():
        return "does not stabilise 0"
    return None


def as_circle(f: Element) -> CircleMap:
    return f.to_circle() if isinstance(f, PLMap) else f


def element_from_json(data: dict) -> Element:
    pts = tuple((rat(x), rat(y)) for x, y in data["breakpoints"])
    carrier = data.get("carrier", "interval")
    if carrier == "interval":
        return PLMap(pts)
    if carrier == "circle":
        return CircleMap(pts)
    raise ValueError(f"unknown carrier {carrier!r}")
