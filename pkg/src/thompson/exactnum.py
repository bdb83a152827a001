"""Exact rationals, dyadic decomposition and exact interval sets.

Rationals are :class:`fractions.Fraction`.  Sets live on one of two carriers:

* ``"interval"`` -- the unit interval [0, 1].  Open sets are subsets of the
  open interval (0, 1); closed sets therefore always contain 0 and 1, which
  every element of F fixes.
* ``"circle"`` -- R/Z, coordinatised by [0, 1).  Open sets are stored split
  at 0: intervals inside [0, 1] plus a ``wrap`` flag recording whether the
  point 0 itself belongs to the set.  An arc through 0 such as (3/4, 1/4)
  is stored as ``(0, 1/4), (3/4, 1)`` with ``wrap=True``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Literal, Sequence, Union

Carrier = Literal["interval", "circle"]
CARRIERS = ("interval", "circle")

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)

RationalLike = Union[Fraction, int, str]


class CarrierMismatch(ValueError):
    pass


def rat(value: RationalLike) -> Fraction:
    """Coerce ints and "p/q" strings to Fraction.  Floats are refused."""
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not a rational literal: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rat(q: Fraction) -> str:
    """"p/q", or "p" when q = 1."""
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rat_arith(a: Fraction, b: Fraction, op: str) -> Fraction | int:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return a / b
    if op == "cmp":
        return (a > b) - (a < b)
    raise ValueError(f"unknown operation {op!r}")


def dyadic_decompose(q: Fraction) -> tuple[int, int] | None:
    """Return (a, k) with q = a / 2**k and k minimal, or None if q is not dyadic."""
    q = rat(q)
    den = q.denominator
    if den & (den - 1):
        return None
    return q.numerator, den.bit_length() - 1


def is_dyadic(q: Fraction) -> bool:
    return dyadic_decompose(q) is not None


def is_power_of_two(q: Fraction) -> bool:
    """True iff q = 2**n for some integer n (n may be negative)."""
    if q <= 0:
        return False
    num, den = q.numerator, q.denominator
    return (num & (num - 1)) == 0 and (den & (den - 1)) == 0 and (num == 1 or den == 1)


def log2_exact(q: Fraction) -> int:
    if not is_power_of_two(q):
        raise ValueError(f"{q} is not an integral power of 2")
    return q.numerator.bit_length() - q.denominator.bit_length()


def circle_point(q: RationalLike) -> Fraction:
    """Canonical representative in [0, 1) of q mod 1."""
    q = rat(q)
    return q - (q.numerator // q.denominator)


def _check_carrier(carrier: str) -> None:
    if carrier not in CARRIERS:
        raise ValueError(f"unknown carrier {carrier!r}")


def _same_carrier(a, b) -> None:
    if a.carrier != b.carrier:
        raise CarrierMismatch(f"carrier mismatch: {a.carrier} vs {b.carrier}")


def _on_open_arc(x: Fraction, a: Fraction, b: Fraction) -> bool:
    """x on the open counter-clockwise arc from a to b; a == b means circle minus a."""
    if a < b:
        return a < x < b
    return x != a and (x > a or x < b or a == b)


def _from_predicate(carrier: str, cuts: Iterable[Fraction],
                    member: Callable[[Fraction], bool]) -> "IntervalSet":
    """Build the open set {x : member(x)}.

    ``member`` must be constant on every open gap between consecutive cuts;
    cuts outside [0, 1] are ignored and 0, 1 are always added.
    """
    pts = sorted({c for c in cuts if 0 <= c <= 1} | {ZERO, ONE})
    gaps = [member((lo + hi) / 2) for lo, hi in zip(pts, pts[1:])]
    intervals: list[tuple[Fraction, Fraction]] = []
    start = None
    for i, inside in enumerate(gaps):
        if not inside:
            continue
        lo, hi = pts[i], pts[i + 1]
        if start is None:
            start = lo
        if not (i + 1 < len(gaps) and gaps[i + 1] and member(hi)):
            intervals.append((start, hi))
            start = None
    wrap = carrier == "circle" and gaps[0] and gaps[-1] and member(ZERO)
    return IntervalSet(carrier, tuple(intervals), wrap)


@dataclass(frozen=True)
class IntervalSet:
    """A finite union of open intervals with rational endpoints."""

    carrier: str
    intervals: tuple[tuple[Fraction, Fraction], ...] = ()
    wrap: bool = False

    def __post_init__(self):
        _check_carrier(self.carrier)
        prev = None
        for lo, hi in self.intervals:
            if not (0 <= lo < hi <= 1):
                raise ValueError(f"bad interval ({lo}, {hi})")
            if prev is not None and lo < prev:
                raise ValueError("intervals must be sorted and disjoint")
            prev = hi
        if self.wrap:
            if self.carrier != "circle":
                raise ValueError("wrap flag is only meaningful on the circle")
            if not self.intervals or self.intervals[0][0] != 0 or self.intervals[-1][1] != 1:
                raise ValueError("a set containing 0 must contain a neighbourhood of 0")

    @classmethod
    def empty(cls, carrier: str) -> "IntervalSet":
        return cls(carrier)

    @classmethod
    def full(cls, carrier: str) -> "IntervalSet":
        """The whole carrier; for the interval this means (0, 1)."""
        return cls(carrier, ((ZERO, ONE),), carrier == "circle")

    @classmethod
    def from_intervals(cls, carrier: str, intervals: Iterable[Sequence[RationalLike]],
                       wrap: bool = False) -> "IntervalSet":
        """Normalise an arbitrary list of open intervals (overlaps allowed).

        On the circle an interval with lo > hi is read as the arc through 0.
        """
        _check_carrier(carrier)
        pieces = []
        for lo, hi in intervals:
            lo, hi = rat(lo), rat(hi)
            if carrier == "circle" and lo > hi:
                pieces += [(lo, ONE), (ZERO, hi)]
                wrap = wrap or hi > 0
            elif lo < hi:
                pieces.append((lo, hi))
        cuts = [p for piece in pieces for p in piece]

        def member(x):
            if x == 0 and carrier == "circle":
                return wrap
            return any(lo < x < hi for lo, hi in pieces)

        return _from_predicate(carrier, cuts, member)

    def cuts(self) -> list[Fraction]:
        return [p for iv in self.intervals for p in iv]

    def contains_point(self, x: RationalLike) -> bool:
        x = rat(x)
        if self.carrier == "circle":
            x = circle_point(x)
            if x == 0:
                return self.wrap
        return any(lo < x < hi for lo, hi in self.intervals)

    __contains__ = contains_point

    def is_empty(self) -> bool:
        return not self.intervals

    def union(self, other: "IntervalSet") -> "IntervalSet":
        _same_carrier(self, other)
        return _from_predicate(self.carrier, self.cuts() + other.cuts(),
                               lambda x: x in self or x in other)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        _same_carrier(self, other)
        return _from_predicate(self.carrier, self.cuts() + other.cuts(),
                               lambda x: x in self and x in other)

    def complement(self) -> "ClosedSet":
        return ClosedSet(self.carrier, self)

    def is_subset(self, other: "IntervalSet") -> bool:
        return self.union(other) == other

    def components(self) -> list[tuple[Fraction, Fraction]]:
        """Maximal open intervals, in order of their left endpoint.

        On the circle an arc through 0 is reported in lift coordinates
        ``(lo, hi + 1)``; the full circle is reported as ``(0, 1)``.
        """
        ivs = list(self.intervals)
        if self.wrap and len(ivs) > 1:
            (_, h0), (l1, _) = ivs[0], ivs[-1]
            ivs = ivs[1:-1] + [(l1, h0 + 1)]
        return ivs

    def image(self, fn: Callable[[Fraction], Fraction]) -> "IntervalSet":
        """Image under an orientation-preserving homeomorphism given pointwise.

        ``fn`` maps carrier points to carrier points (in [0, 1) on the circle).
        """
        if self.carrier == "interval":
            return IntervalSet.from_intervals(
                "interval", [(fn(lo), fn(hi)) for lo, hi in self.intervals])
        if self == IntervalSet.full("circle"):
            return self
        arcs = [(fn(circle_point(lo)), fn(circle_point(hi))) for lo, hi in self.components()]
        cuts = [p for arc in arcs for p in arc]

        def member(x):
            return any(_on_open_arc(x, a, b) for a, b in arcs)
        return _from_predicate("circle", cuts, member)

    def to_json(self) -> dict:
        out = {"carrier": self.carrier,
               "intervals": [[format_rat(lo), format_rat(hi)] for lo, hi in self.intervals]}
        if self.carrier == "circle":
            out["wrap"] = self.wrap
        return out

    @classmethod
    def from_json(cls, data: dict) -> "IntervalSet":
        return cls(data["carrier"],
                   tuple((rat(lo), rat(hi)) for lo, hi in data["intervals"]),
                   bool(data.get("wrap", False)))


@dataclass(frozen=True)
class ClosedSet:
    """Carrier minus an open :class:`IntervalSet`."""

    carrier: str
    open_complement: IntervalSet

    def __post_init__(self):
        _check_carrier(self.carrier)
        if self.open_complement.carrier != self.carrier:
            raise CarrierMismatch("complement lives on a different carrier")

    @classmethod
    def from_components(cls, carrier: str, intervals: Iterable[Sequence[RationalLike]] = (),
                        points: Iterable[RationalLike] = ()) -> "ClosedSet":
        """Closed set from closed intervals [lo, hi] and isolated points."""
        ivs = [(rat(lo), rat(hi)) for lo, hi in intervals]
        pts = [rat(p) for p in points]
        if carrier == "circle":
            pts = [circle_point(p) for p in pts]

        def member(x):
            if carrier == "interval" and x in (0, 1):
                return True
            for lo, hi in ivs:
                if lo <= x <= hi:
                    return True
                if carrier == "circle" and ((lo > hi and (x >= lo or x <= hi))
                                            or (x == 0 and hi == 1)):
                    return True
            return x in pts

        cuts = [p for iv in ivs for p in iv] + pts
        return cls(carrier, _from_predicate(carrier, cuts, lambda x: not member(x)))

    def contains_point(self, x: RationalLike) -> bool:
        return not self.open_complement.contains_point(x)

    __contains__ = contains_point

    def complement(self) -> IntervalSet:
        return self.open_complement

    def is_empty(self) -> bool:
        return self.open_complement == IntervalSet.full(self.carrier)

    def intersect(self, other: "ClosedSet") -> "ClosedSet":
        _same_carrier(self, other)
        return ClosedSet(self.carrier, self.open_complement.union(other.open_complement))

    def union(self, other: "ClosedSet") -> "ClosedSet":
        _same_carrier(self, other)
        return ClosedSet(self.carrier, self.open_complement.intersect(other.open_complement))

    def interior(self) -> IntervalSet:
        cuts = self.open_complement.cuts()
        carrier = self.carrier

        def member(x):
            return x not in self.open_complement
        return _from_predicate(carrier, cuts, member)

    def components(self) -> tuple[list[tuple[Fraction, Fraction]], list[Fraction]]:
        """(closed intervals, isolated points) in split form on the circle."""
        pts = sorted(set(self.open_complement.cuts()) | {ZERO, ONE})
        intervals = list(self.interior().intervals)
        covered = set()
        for lo, hi in intervals:
            covered.update((lo, hi))
        isolated = []
        for p in pts:
            if self.carrier == "circle" and p == 1:
                continue
            if p in self and p not in covered:
                if self.carrier == "circle" and p == 0 and ONE in covered:
                    continue
                isolated.append(p)
        return intervals, isolated

    def points(self) -> list[Fraction]:
        return self.components()[1]

    def to_json(self) -> dict:
        intervals, points = self.components()
        return {"carrier": self.carrier,
                "intervals": [[format_rat(lo), format_rat(hi)] for lo, hi in intervals],
                "points": [format_rat(p) for p in points]}
