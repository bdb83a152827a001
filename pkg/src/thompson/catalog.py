"""Named elements and the machinery for planting copies of F on dyadic intervals.

x0 is pinned by 1/4·x0 = 1/2: its table is (0,0), (1/4,1/2), (1/2,3/4), (1,1).
This is the mirror image of the table found in much of the literature, where
x0 sends 1/2 to 1/4.  x1 and b are transplanted copies of x0.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from thompson.exactnum import ONE, ZERO, RationalLike, format_rat, is_dyadic, rat
from thompson.plhomeo import CircleMap, Element, PLMap, conjugate, power, validate

Interval = tuple[Fraction, Fraction]

Q = Fraction
X0 = PLMap(((ZERO, ZERO), (Q(1, 4), Q(1, 2)), (Q(1, 2), Q(3, 4)), (ONE, ONE)))
B_SUPPORT = (Q(1, 4), Q(1, 2))


def _dyadic_interval(iv: Sequence[RationalLike]) -> Interval:
    lo, hi = (rat(v) for v in iv)
    if not (is_dyadic(lo) and is_dyadic(hi)):
        raise ValueError(f"interval [{format_rat(lo)}, {format_rat(hi)}] has non-dyadic endpoints")
    if not lo < hi:
        raise ValueError(f"interval [{format_rat(lo)}, {format_rat(hi)}] is empty")
    return lo, hi


def standard_pieces(lo: Fraction, hi: Fraction) -> list[Interval]:
    """Greedy left-to-right decomposition of [lo, hi] into maximal standard dyadic intervals."""
    out = []
    p = lo
    while p < hi:
        w = Fraction(1)
        while (p / w).denominator != 1 or p + w > hi:
            w /= 2
        out.append((p, p + w))
        p += w
    return out


def _split_largest(pieces: list[Interval]) -> list[Interval]:
    widths = [b - a for a, b in pieces]
    i = widths.index(max(widths))
    a, b = pieces[i]
    m = (a + b) / 2
    return pieces[:i] + [(a, m), (m, b)] + pieces[i + 1:]


def dyadic_rescale(source: Sequence[RationalLike], target: Sequence[RationalLike]) -> tuple[tuple[Fraction, Fraction], ...]:
    """Breakpoint table of a PL homeomorphism source -> target.

    Both intervals are cut greedily into standard dyadic pieces; the shorter
    list has its leftmost widest piece halved until the counts agree, then
    pieces are matched in order.  Every slope is a power of 2.
    """
    src, tgt = _dyadic_interval(source), _dyadic_interval(target)
    a, b = standard_pieces(*src), standard_pieces(*tgt)
    while len(a) != len(b):
        if len(a) < len(b):
            a = _split_largest(a)
        else:
            b = _split_largest(b)
    pts = [(pa[0], pb[0]) for pa, pb in zip(a, b)] + [(src[1], tgt[1])]
    # merge collinear pieces
    out = [pts[0]]
    for i in range(1, len(pts) - 1):
        (x0, y0), (x1, y1), (x2, y2) = out[-1], pts[i], pts[i + 1]
        if (y1 - y0) * (x2 - x1) != (y2 - y1) * (x1 - x0):
            out.append(pts[i])
    out.append(pts[-1])
    return tuple(out)


def _apply(table, x: Fraction) -> Fraction:
    for (xa, ya), (xb, yb) in zip(table, table[1:]):
        if xa <= x <= xb:
            return ya + (yb - ya) * (x - xa) / (xb - xa)
    raise ValueError(f"{x} outside the table's domain")


def transplant(g: PLMap, target: Sequence[RationalLike]) -> PLMap:
    """Copy of g acting on ``target`` (identity elsewhere): x ↦ φ(g(φ⁻¹(x))) with φ = rescale([0,1], target)."""
    problem = validate(g, "F")
    if problem is not None or not isinstance(g, PLMap):
        raise ValueError(f"cannot transplant a non-F element: {problem or 'circle map'}")
    lo, hi = _dyadic_interval(target)
    if lo < 0 or hi > 1:
        raise ValueError("target must lie inside [0, 1]")
    phi = dyadic_rescale((ZERO, ONE), (lo, hi))
    phi_inv = tuple((y, x) for x, y in phi)
    # breaks of φ⁻¹, of g (moved by φ), and of φ (pulled back through g)
    cuts = {y for _, y in phi}
    cuts |= {_apply(phi, x) for x in g.xs}
    cuts |= {_apply(phi, g.inverse_value(x)) for x, _ in phi}
    pts = [(ZERO, ZERO)] + [(x, _apply(phi, g(_apply(phi_inv, x)))) for x in sorted(cuts)] + [(ONE, ONE)]
    deduped = []
    for p in pts:
        if not deduped or deduped[-1][0] != p[0]:
            deduped.append(p)
    return PLMap(tuple(deduped))


def rotation(d: RationalLike) -> CircleMap:
    """x ↦ x + d mod 1."""
    d = rat(d)
    if not is_dyadic(d):
        raise ValueError(f"rotation amount {format_rat(d)} is not dyadic")
    d -= d.numerator // d.denominator
    return CircleMap(((ZERO, d), (ONE, d + 1)))


X1 = transplant(X0, (Q(1, 2), ONE))
B = transplant(X0, B_SUPPORT)

_STANDARD = {"x0": X0, "x1": X1, "b": B, "id": PLMap.identity()}


def standard(name: str) -> PLMap:
    try:
        return _STANDARD[name]
    except KeyError:
        raise ValueError(f"unknown standard element {name!r}") from None


@lru_cache(maxsize=256)
def base_generator(k: int) -> PLMap:
    """b conjugated by x0**k; supported on (1/4, 1/2)·x0**k."""
    return conjugate(B, power(X0, k))


def base_interval(k: int) -> Interval:
    """Support of base_generator(k): (2**(k-2), 2**(k-1)) for k <= 0, (1 - 2**-k, 1 - 2**-(k+1)) for k >= 1."""
    if k <= 0:
        return Fraction(1, 2 ** (2 - k)), Fraction(1, 2 ** (1 - k))
    return ONE - Fraction(1, 2 ** k), ONE - Fraction(1, 2 ** (k + 1))


def base_index(interval: Interval) -> int | None:
    """The k with base_interval(k) == interval, if any."""
    lo, hi = interval
    if 0 < lo < Fraction(1, 2):
        if lo.numerator != 1 or lo.denominator & (lo.denominator - 1):
            return None
        k = 2 - (lo.denominator.bit_length() - 1)
    elif Fraction(1, 2) <= lo < 1:
        gap = ONE - lo
        if gap.numerator != 1 or gap.denominator & (gap.denominator - 1):
            return None
        k = gap.denominator.bit_length() - 1
    else:
        return None
    return k if base_interval(k) == (lo, hi) else None


def b_family(target: Sequence[RationalLike]) -> tuple[PLMap, PLMap]:
    """Generators of the copy of F supported in ``target``."""
    return transplant(X0, target), transplant(X1, target)


def circle(g: Element) -> CircleMap:
    return g.to_circle() if isinstance(g, PLMap) else g
