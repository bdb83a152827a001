import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from thompson.analysis import (
    BOTH,
    FULL,
    LEFT,
    NONE,
    RIGHT,
    FreeCertificate,
    Inconclusive,
    Orbital,
    approaches,
    free_precondition,
    group_fixed_set,
    group_orbitals,
    orbitals,
    replay_free,
    replay_ubiquity,
    ubiquity_search,
    word_element,
)
from thompson.acceptance import F4
from thompson.catalog import B, X0, X1, base_generator, circle, rotation, transplant
from thompson.plhomeo import PLMap, conjugate, evaluate

from conftest import f_elements

HALF_X0 = transplant(X0, (0, Q(1, 2)))


def _spans(orbs):
    return [(o.lo, o.hi) for o in orbs]


def test_orbitals_examples():
    assert _spans(orbitals(B)) == [(Q(1, 4), Q(1, 2))]
    assert orbitals(PLMap.identity()) == []
    assert _spans(orbitals(F4)) == [(0, Q(7, 48)), (Q(7, 48), 1)]


def test_group_orbitals_examples():
    assert _spans(group_orbitals([X0])) == [(0, 1)]
    assert _spans(group_orbitals([B, base_generator(1)])) == [(Q(1, 4), Q(1, 2)), (Q(1, 2), Q(3, 4))]
    assert group_orbitals([PLMap.identity()]) == []


def test_approaches_examples():
    whole = Orbital(Q(0), Q(1), "group")
    assert approaches(X0, whole) == FULL
    assert approaches(HALF_X0, whole) == LEFT
    assert approaches(B, whole) == NONE
    assert approaches(transplant(X0, (Q(1, 2), 1)), whole) == RIGHT
    both = PLMap(HALF_X0.breakpoints[:-1] + transplant(X0, (Q(1, 2), 1)).breakpoints[2:])
    assert approaches(both, whole) == BOTH


@given(f_elements(12), f_elements(12))
def test_approaches_exhaustive_and_conjugation_invariant(g, h):
    for o in group_orbitals([g, h]) + [Orbital(Q(0), Q(1))]:
        verdict = approaches(g, o)
        assert verdict in (LEFT, RIGHT, BOTH, FULL, NONE)
        # h's fixed points at the orbital ends let it carry the orbital to itself
        if evaluate(h, o.lo) == o.lo and evaluate(h, o.hi) == o.hi:
            assert approaches(conjugate(g, h), o) == verdict


def test_ubiquity_examples():
    cert = ubiquity_search([X0, HALF_X0], 1)
    assert cert.word == (2,) and (cert.orbital.lo, cert.orbital.hi) == (0, 1) and cert.end == LEFT
    assert replay_ubiquity([X0, HALF_X0], cert)
    for maxlen in (1, 3, 6):
        assert ubiquity_search([X0], maxlen) == Inconclusive(maxlen)
        assert ubiquity_search([B], maxlen) == Inconclusive(maxlen)


def test_ubiquity_finds_longer_words():
    # x0 and x1 each have a single full orbital only if you look at one of them;
    # x1 alone approaches neither end of (0,1) fully, it is supported on (1/2,1)
    cert = ubiquity_search([X0, X1], 2)
    assert cert and cert.end in (LEFT, RIGHT)
    assert replay_ubiquity([X0, X1], cert)
    assert approaches(word_element([X0, X1], cert.word), cert.orbital) == cert.end


def test_ubiquity_rejects_bad_input():
    with pytest.raises(ValueError):
        ubiquity_search([X0], 0)
    with pytest.raises(ValueError):
        ubiquity_search([rotation(Q(1, 2))], 2)


@settings(max_examples=20)
@given(st.lists(f_elements(8), min_size=1, max_size=3))
def test_ubiquity_deterministic(gens):
    first = ubiquity_search(gens, 3)
    assert ubiquity_search(gens, 3) == first
    if first:
        assert replay_ubiquity(gens, first)


def test_free_certificate_examples():
    g1 = circle(transplant(X0, (0, Q(3, 4))))
    g2 = conjugate(g1, rotation(Q(1, 2)))
    cert = free_precondition([g1, g2])
    assert isinstance(cert, FreeCertificate)
    assert cert.intersection.is_empty()
    assert cert.fixed_sets[0].to_json()["intervals"] == [["3/4", "1"]]
    assert cert.fixed_sets[1].to_json()["intervals"] == [["1/4", "1/2"]]
    assert replay_free(cert)


def test_free_not_applicable_examples():
    verdict = free_precondition([circle(B), circle(base_generator(1))])
    assert not verdict and verdict.reason == "fixed sets intersect"
    verdict = free_precondition([rotation(Q(1, 2)), circle(X0)])
    assert not verdict and verdict.reason == "element 1 has empty fixed set"
    with pytest.raises(ValueError):
        free_precondition([circle(X0)])


@given(f_elements(10), f_elements(10), st.integers(0, 2))
def test_group_fixed_set_matches_pointwise(g, h, which):
    gens = [g, h, X0][: which + 1]
    fixed = group_fixed_set(gens)
    rng = random.Random(hash((g, h)))
    samples = [Q(rng.randrange(0, 1025), 1024) for _ in range(48)]
    samples += [Q(rng.randrange(0, 3001), 3000) for _ in range(16)]
    for x in samples:
        pointwise = all(evaluate(k, x) == x for k in gens)
        assert fixed.contains_point(x) == pointwise
