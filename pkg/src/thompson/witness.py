"""Witnesses that D is normalish in F and that F is normalish in T.

For a finite set K of conjugators, a witness is a nontrivial w lying in every
conjugate M^k (k ∈ K).  Under the right-action convention w ∈ M^k = k⁻¹ M k
exactly when k w k⁻¹ = conjugate(w, k⁻¹) lies in M.

D is the group generated by the base generators b^(x0^k); its elements are
recognised structurally, see :func:`d_membership`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from thompson import catalog
from thompson.exactnum import ZERO, IntervalSet, circle_point, format_rat, log2_exact, rat
from thompson.plhomeo import (
    CircleMap,
    Element,
    PLMap,
    compose,
    conjugate,
    element_from_json,
    germ_at_zero,
    invert,
    power,
    restriction_equals,
    support,
    validate,
)

D_IN_F = "D_in_F"
F_IN_T = "F_in_T"
VARIANTS = {D_IN_F: "normalish_in_F", F_IN_T: "normalish_F_in_T"}


class SearchCapExceeded(RuntimeError):
    """The descending witness search ran past its hard cap (an implementation bug)."""


class NormalishFailure(Exception):
    def __init__(self, index: int | None, reason: str):
        self.index = index
        self.reason = reason
        where = "witness" if index is None else f"conjugator {index}"
        super().__init__(f"{where}: {reason}")


@dataclass(frozen=True)
class DDecomposition:
    """Product of base_generator(k) ** p over the terms; supports are disjoint."""

    terms: tuple[tuple[int, int], ...]

    def recompose(self) -> PLMap:
        result = PLMap.identity()
        for k, p in self.terms:
            result = compose(result, power(catalog.base_generator(k), p))
        return result

    def to_json(self) -> list:
        return [[k, p] for k, p in self.terms]


@dataclass(frozen=True)
class NotMember:
    reason: str

    def __bool__(self):
        return False


def _right_slope(f: PLMap, x: Fraction) -> Fraction:
    for lo, hi, lam, _ in f.pieces():
        if lo <= x < hi:
            return lam
    raise ValueError(f"no piece to the right of {x}")


def _exponent(slope: Fraction, base_slope: Fraction) -> int | None:
    """p with slope == base_slope ** p; None if there is none."""
    a, b = log2_exact(slope), log2_exact(base_slope)
    if b == 0 or a % b:
        return None
    return a // b


def d_membership(h: PLMap) -> Union[DDecomposition, NotMember]:
    if not isinstance(h, PLMap):
        raise TypeError("D-membership is defined for interval maps")
    problem = validate(h, "F")
    if problem is not None:
        raise ValueError(f"not an element of F: {problem}")
    terms = []
    for lo, hi in support(h).components():
        k = catalog.base_index((lo, hi))
        if k is None:
            return NotMember(f"support component ({format_rat(lo)},{format_rat(hi)}) is not any I_k")
        gen = catalog.base_generator(k)
        p = _exponent(_right_slope(h, lo), _right_slope(gen, lo))
        if p is None or p == 0:
            return NotMember(f"germ slope at {format_rat(lo)} is not a power of the base generator's")
        if not restriction_equals(h, power(gen, p), lo, hi):
            return NotMember(f"h differs from base_generator({k})^{p} on I_{k}")
        terms.append((k, p))
    decomposition = DDecomposition(tuple(terms))
    if decomposition.recompose() != h:
        return NotMember("recomposition differs from h")
    return decomposition


def f_membership_in_T(g: Element) -> bool:
    g = catalog.circle(g)
    problem = validate(g, "T")
    if problem is not None:
        raise ValueError(f"not an element of T: {problem}")
    return g(ZERO) == 0


@dataclass(frozen=True)
class TranscriptEntry:
    conjugator: Element
    conjugate: Element
    evidence: Union[DDecomposition, Fraction]

    def to_json(self) -> dict:
        out = {"conjugator": self.conjugator.to_json(), "conjugate": self.conjugate.to_json()}
        if isinstance(self.evidence, DDecomposition):
            out["decomposition"] = self.evidence.to_json()
        else:
            out["image_of_zero"] = format_rat(self.evidence)
        return out


@dataclass(frozen=True)
class Certificate:
    variant: str
    witness: Element
    conjugators: tuple[Element, ...]
    transcript: tuple[TranscriptEntry, ...]
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def tag(self) -> str:
        return D_IN_F if self.variant == VARIANTS[D_IN_F] else F_IN_T

    def to_json(self) -> dict:
        return {"variant": self.variant,
                "witness": self.witness.to_json(),
                "conjugators": [k.to_json() for k in self.conjugators],
                **self.extra,
                "transcript": [e.to_json() for e in self.transcript]}


def certificate_from_json(data: dict) -> Certificate:
    variant = data["variant"]
    if variant not in VARIANTS.values():
        raise ValueError(f"unknown certificate variant {variant!r}")
    entries = []
    for e in data["transcript"]:
        if "decomposition" in e:
            evidence = DDecomposition(tuple((int(k), int(p)) for k, p in e["decomposition"]))
        else:
            evidence = rat(e["image_of_zero"])
        entries.append(TranscriptEntry(element_from_json(e["conjugator"]),
                                       element_from_json(e["conjugate"]), evidence))
    extra = {k: v for k, v in data.items()
             if k not in ("variant", "witness", "conjugators", "transcript")}
    return Certificate(variant, element_from_json(data["witness"]),
                       tuple(element_from_json(k) for k in data["conjugators"]),
                       tuple(entries), extra)


def _as_interval(k: Element) -> PLMap:
    if isinstance(k, CircleMap):
        return k.to_interval()
    return k


def search_cap(K: Sequence[PLMap]) -> int:
    """Lowest candidate index tried by :func:`witness_in_F`.

    Low enough that every base-generator support lies where each k⁻¹ is a pure
    dilation x ↦ 2**-n x, with a fixed margin of 64.
    """
    depth = 64
    for k in K:
        depth += len(k.breakpoints)
    dilations = [germ_at_zero(k).n for k in K] or [0]
    radii = [germ_at_zero(invert(k)).delta.denominator.bit_length() for k in K] or [0]
    return -(depth + max(abs(n) for n in dilations) + max(radii))


def witness_in_F(K: Sequence[Element]) -> Certificate:
    K = tuple(_as_interval(k) for k in K)
    for k in K:
        problem = validate(k, "F")
        if problem is not None:
            raise ValueError(f"conjugator is not in F: {problem}")
    inverses = [invert(k) for k in K]
    cap = search_cap(K)
    j = 0
    while j >= cap:
        w = catalog.base_generator(j)
        entries = []
        for k, k_inv in zip(K, inverses):
            c = conjugate(w, k_inv)
            evidence = d_membership(c)
            if not evidence:
                break
            entries.append(TranscriptEntry(k, c, evidence))
        else:
            return Certificate(VARIANTS[D_IN_F], w, K, tuple(entries), {"index": j})
        j -= 1
    raise SearchCapExceeded(f"no base generator with index >= {cap} works")


def avoiding_interval(S: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """First standard dyadic interval (by depth, then position) whose closure misses S on the circle."""
    points = {circle_point(s) for s in S}
    depth = 1
    while True:
        width = Fraction(1, 2 ** depth)
        for a in range(2 ** depth):
            lo, hi = a * width, (a + 1) * width
            if not any(lo <= s <= hi or (hi == 1 and s == 0) for s in points):
                return lo, hi
        depth += 1


def witness_F_in_T(K: Sequence[Element]) -> Certificate:
    K = tuple(catalog.circle(k) for k in K)
    for k in K:
        problem = validate(k, "T")
        if problem is not None:
            raise ValueError(f"conjugator is not in T: {problem}")
    S = sorted({k(ZERO) for k in K} | {ZERO})
    lo, hi = avoiding_interval(S)
    w = catalog.transplant(catalog.X0, (lo, hi)).to_circle()
    entries = []
    for k in K:
        c = conjugate(w, invert(k))
        entries.append(TranscriptEntry(k, c, c(ZERO)))
    extra = {"avoided_points": [format_rat(s) for s in S],
             "interval": [format_rat(lo), format_rat(hi)]}
    return Certificate(VARIANTS[F_IN_T], w, K, tuple(entries), extra)


def normalish_verify(tag: str, K: Sequence[Element], w: Element) -> list[TranscriptEntry]:
    """Recompute from scratch that w is nontrivial and lies in every conjugate M^k."""
    if tag == D_IN_F:
        if not isinstance(w, PLMap) or validate(w, "F") is not None:
            raise NormalishFailure(None, "witness is not an element of F")
        K = [_as_interval(k) for k in K]
    elif tag == F_IN_T:
        w = catalog.circle(w)
        if validate(w, "T") is not None:
            raise NormalishFailure(None, "witness is not an element of T")
        K = [catalog.circle(k) for k in K]
    else:
        raise ValueError(f"unknown tag {tag!r}")
    if w.is_identity():
        raise NormalishFailure(None, "witness is the identity")
    transcript = []
    for i, k in enumerate(K):
        c = conjugate(w, invert(k))
        if tag == D_IN_F:
            evidence = d_membership(c)
            if not evidence:
                raise NormalishFailure(i, f"d_membership: {evidence.reason}")
        else:
            evidence = c(ZERO)
            if evidence != 0:
                raise NormalishFailure(i, "witness does not fix 0·k")
        transcript.append(TranscriptEntry(k, c, evidence))
    return transcript


def verify_certificate(cert: Certificate) -> list[TranscriptEntry]:
    """Replay a certificate independently and check its recorded transcript against the replay."""
    fresh = normalish_verify(cert.tag, cert.conjugators, cert.witness)
    if len(fresh) != len(cert.transcript):
        raise NormalishFailure(None, "transcript length does not match the conjugator list")
    for i, (got, want) in enumerate(zip(cert.transcript, fresh)):
        if got != want:
            raise NormalishFailure(i, "recorded transcript entry differs from the replay")
    if cert.tag == F_IN_T and "interval" in cert.extra:
        lo, hi = (rat(v) for v in cert.extra["interval"])
        region = IntervalSet.from_intervals("circle", [(lo, hi)])
        if not support(cert.witness).is_subset(region):
            raise NormalishFailure(None, "witness support leaves the recorded interval")
    return fresh
