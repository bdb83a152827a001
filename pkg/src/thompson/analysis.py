"""Orbitals and the two checkable hypotheses behind the free-subgroup / copy-of-F dichotomy.

* :func:`ubiquity_search` looks for an element approaching exactly one end of
  a group orbital; finding one licenses "H contains a copy of F".
* :func:`free_precondition` certifies that a set of circle maps all have
  fixed points but no common one; this licenses "the group contains
  non-abelian free subgroups".

Neither conclusion is re-proved here; the certificates record the hypothesis.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from thompson.exactnum import ClosedSet, IntervalSet, format_rat
from thompson.plhomeo import (
    CircleMap,
    Element,
    PLMap,
    compose,
    fixed_set,
    invert,
    support,
    validate,
)

LEFT, RIGHT, BOTH, FULL, NONE = "left", "right", "both", "full", "none"


@dataclass(frozen=True)
class Orbital:
    lo: Fraction
    hi: Fraction
    owner: str = "element"

    def to_json(self) -> list:
        return [format_rat(self.lo), format_rat(self.hi)]


@dataclass(frozen=True)
class UbiquityCertificate:
    word: tuple[int, ...]
    orbital: Orbital
    end: str

    def to_json(self) -> dict:
        return {"word": list(self.word), "orbital": self.orbital.to_json(), "end": self.end}


@dataclass(frozen=True)
class Inconclusive:
    maxlen: int

    def __bool__(self):
        return False

    def to_json(self) -> dict:
        return {"inconclusive": True, "maxlen": self.maxlen}


@dataclass(frozen=True)
class FreeCertificate:
    elements: tuple[CircleMap, ...]
    fixed_sets: tuple[ClosedSet, ...]
    intersection: ClosedSet

    def to_json(self) -> dict:
        return {"elements": [g.to_json() for g in self.elements],
                "fixed_sets": [f.to_json() for f in self.fixed_sets],
                "intersection": self.intersection.to_json()}


@dataclass(frozen=True)
class NotApplicable:
    reason: str

    def __bool__(self):
        return False

    def to_json(self) -> dict:
        return {"not_applicable": self.reason}


def _orbitals_of(open_set: IntervalSet, owner: str) -> list[Orbital]:
    return [Orbital(lo, hi, owner) for lo, hi in open_set.components()]


def orbitals(g: Element) -> list[Orbital]:
    return _orbitals_of(support(g), "element")


def group_fixed_set(gens: Sequence[Element]) -> ClosedSet:
    """Fix(<gens>) as the intersection of the generators' fixed sets."""
    if not gens:
        raise ValueError("need at least one generator")
    result = fixed_set(gens[0])
    for g in gens[1:]:
        result = result.intersect(fixed_set(g))
    return result


def group_orbitals(gens: Sequence[Element]) -> list[Orbital]:
    return _orbitals_of(group_fixed_set(gens).complement(), "group")


def approaches(g: Element, orbital: Orbital) -> str:
    a, b = orbital.lo, orbital.hi
    left = right = False
    for o in orbitals(g):
        if (o.lo, o.hi) == (a, b):
            return FULL
        if o.lo == a and a < o.hi < b:
            left = True
        elif o.hi == b and a < o.lo < b:
            right = True
    if left and right:
        return BOTH
    return LEFT if left else RIGHT if right else NONE


def ubiquity_search(gens: Sequence[PLMap], maxlen: int) -> Union[UbiquityCertificate, Inconclusive]:
    """Breadth-first search over freely reduced words up to ``maxlen``.

    Words are tuples of signed 1-based generator indices (-i is the inverse of
    generator i).  Letters are tried in the order 1, -1, 2, -2, ...; a word
    whose element has already been seen is not extended.
    """
    if maxlen < 1:
        raise ValueError("maxlen must be at least 1")
    gens = list(gens)
    for g in gens:
        if not isinstance(g, PLMap) or validate(g, "F") is not None:
            raise ValueError("ubiquity search needs interval maps in F")
    targets = group_orbitals(gens)
    letters = [s * (i + 1) for i in range(len(gens)) for s in (1, -1)]
    letter_map = {i + 1: g for i, g in enumerate(gens)}
    letter_map.update({-(i + 1): invert(g) for i, g in enumerate(gens)})

    seen = {PLMap.identity()}
    frontier = deque([((), PLMap.identity())])
    for _ in range(maxlen):
        nxt = deque()
        for word, elem in frontier:
            for letter in letters:
                if word and word[-1] == -letter:
                    continue
                h = compose(elem, letter_map[letter])
                if h in seen:
                    continue
                seen.add(h)
                w = word + (letter,)
                for o in targets:
                    verdict = approaches(h, o)
                    if verdict in (LEFT, RIGHT):
                        return UbiquityCertificate(w, o, verdict)
                nxt.append((w, h))
        frontier = nxt
    return Inconclusive(maxlen)


def word_element(gens: Sequence[PLMap], word: Sequence[int]) -> PLMap:
    h = PLMap.identity()
    for letter in word:
        g = gens[abs(letter) - 1]
        h = compose(h, g if letter > 0 else invert(g))
    return h


def replay_ubiquity(gens: Sequence[PLMap], cert: UbiquityCertificate) -> bool:
    """Recompute the group orbital and the approach verdict for the recorded word."""
    if cert.orbital not in group_orbitals(gens):
        return False
    return approaches(word_element(gens, cert.word), cert.orbital) == cert.end


def free_precondition(gens: Sequence[Element]) -> Union[FreeCertificate, NotApplicable]:
    if len(gens) < 2:
        raise ValueError("the free-subgroup check needs at least two elements")
    gens = tuple(g.to_circle() if isinstance(g, PLMap) else g for g in gens)
    fixed = tuple(fixed_set(g) for g in gens)
    for i, f in enumerate(fixed):
        if f.is_empty():
            return NotApplicable(f"element {i + 1} has empty fixed set")
    meet = fixed[0]
    for f in fixed[1:]:
        meet = meet.intersect(f)
    if not meet.is_empty():
        return NotApplicable("fixed sets intersect")
    return FreeCertificate(gens, fixed, meet)


def replay_free(cert: FreeCertificate) -> bool:
    again = free_precondition(cert.elements)
    return bool(again) and again == cert
