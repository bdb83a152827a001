import json
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from thompson.catalog import B, X0, X1, base_generator, circle, rotation, transplant
from thompson.exactnum import IntervalSet
from thompson.plhomeo import CircleMap, PLMap, compose, conjugate, invert, power, support
from thompson.treepair import random_element
from thompson.witness import (
    D_IN_F,
    F_IN_T,
    NormalishFailure,
    avoiding_interval,
    certificate_from_json,
    d_membership,
    f_membership_in_T,
    normalish_verify,
    search_cap,
    verify_certificate,
    witness_F_in_T,
    witness_in_F,
)

from conftest import f_elements


def test_d_membership_examples():
    assert d_membership(B).terms == ((0, 1),)
    verdict = d_membership(X0)
    assert not verdict
    assert verdict.reason == "support component (0,1) is not any I_k"
    h = compose(base_generator(-2), power(base_generator(3), -2))
    assert d_membership(h).terms == ((-2, 1), (3, -2))
    assert d_membership(h).recompose() == h
    assert d_membership(PLMap.identity()).terms == ()


def test_d_membership_rejects_wrong_shape_on_a_tile():
    # supported exactly on I_0 but not a power of b
    w = transplant(compose(X0, X1), (Q(1, 4), Q(1, 2)))
    assert support(w).intervals == ((Q(1, 4), Q(1, 2)),)
    assert not d_membership(w)


def test_d_membership_rejects_non_f():
    with pytest.raises(ValueError):
        d_membership(PLMap(((0, 0), (Q(1, 3), Q(1, 2)), (1, 1))))


@given(st.dictionaries(st.integers(-12, 12), st.integers(-3, 3).filter(bool), max_size=5))
def test_d_membership_recovers_products(exps):
    h = PLMap.identity()
    for k, p in exps.items():
        h = compose(h, power(base_generator(k), p))
    assert d_membership(h).terms == tuple(sorted(exps.items()))


def test_witness_in_F_examples():
    cert = witness_in_F([PLMap.identity()])
    assert cert.witness == B and cert.extra["index"] == 0
    assert cert.transcript[0].evidence.terms == ((0, 1),)
    cert = witness_in_F([X0])
    assert cert.witness == B
    assert cert.transcript[0].conjugate == base_generator(-1)
    assert cert.transcript[0].evidence.terms == ((-1, 1),)


def test_witness_in_F_random_sets_replay():
    for seed in range(50):
        K = [random_element(1 + (seed * 7 + i) % 25, 1000 * seed + i).to_plmap() for i in range(4)]
        cert = witness_in_F(K)
        assert cert.extra["index"] >= search_cap(K)
        verify_certificate(cert)
        assert normalish_verify(D_IN_F, K, cert.witness) == list(cert.transcript)


@settings(max_examples=25)
@given(st.lists(f_elements(15), min_size=1, max_size=4))
def test_witness_in_F_monotone_under_subsets(K):
    j = witness_in_F(K).extra["index"]
    w = base_generator(j)
    for i in range(len(K)):
        normalish_verify(D_IN_F, K[:i] + K[i + 1:], w)
        assert witness_in_F(K[:i] + K[i + 1:]).extra["index"] >= j


def test_f_membership_in_T():
    assert f_membership_in_T(CircleMap.identity())
    assert not f_membership_in_T(rotation(Q(1, 2)))
    assert f_membership_in_T(B.to_circle())


def _brute_avoiding(S):
    for depth in range(1, 20):
        w = Q(1, 2 ** depth)
        for a in range(2 ** depth):
            lo, hi = a * w, (a + 1) * w
            touched = any(lo <= s <= hi for s in S) or (hi == 1 and 0 in S) or (lo == 0 and 1 in S)
            if not touched:
                return lo, hi


def test_avoiding_interval_examples():
    assert avoiding_interval([]) == (0, Q(1, 2))
    assert avoiding_interval([Q(0)]) == (Q(1, 4), Q(1, 2))
    assert avoiding_interval([Q(0), Q(1, 2)]) == (Q(1, 8), Q(1, 4))


@given(st.lists(st.integers(0, 63).map(lambda n: Q(n, 64)), max_size=8))
def test_avoiding_interval_matches_brute_force(S):
    assert avoiding_interval(S) == _brute_avoiding(S)


def test_witness_F_in_T_examples():
    cert = witness_F_in_T([CircleMap.identity()])
    assert cert.extra["avoided_points"] == ["0"]
    assert cert.extra["interval"] == ["1/4", "1/2"]
    assert cert.witness == B.to_circle()
    cert = witness_F_in_T([rotation(Q(1, 2))])
    assert cert.extra["avoided_points"] == ["0", "1/2"]
    assert cert.extra["interval"] == ["1/8", "1/4"]
    assert cert.transcript[0].evidence == 0
    assert witness_F_in_T([B.to_circle()]).to_json() == witness_F_in_T([CircleMap.identity()]).to_json() | {
        "conjugators": [B.to_circle().to_json()],
        "transcript": witness_F_in_T([B.to_circle()]).to_json()["transcript"],
    }


@settings(max_examples=30)
@given(st.lists(st.tuples(f_elements(10), st.integers(0, 15)), min_size=1, max_size=4))
def test_witness_F_in_T_properties(pairs):
    K = [compose(circle(g), rotation(Q(r, 16))) for g, r in pairs]
    cert = witness_F_in_T(K)
    S = [k(Q(0)) for k in K] + [Q(0)]
    assert not any(support(cert.witness).contains_point(s) for s in S)
    assert all(entry.conjugate(Q(0)) == 0 for entry in cert.transcript)
    verify_certificate(cert)


def test_normalish_verify_failures():
    with pytest.raises(NormalishFailure, match="d_membership"):
        normalish_verify(D_IN_F, [PLMap.identity()], X0)
    with pytest.raises(NormalishFailure, match="witness does not fix 0·k"):
        normalish_verify(F_IN_T, [rotation(Q(1, 2))], rotation(Q(1, 4)))
    with pytest.raises(NormalishFailure, match="identity"):
        normalish_verify(D_IN_F, [X0], PLMap.identity())


def test_certificate_json_roundtrip_and_tampering():
    cert = witness_in_F([X0, invert(X0)])
    data = json.loads(json.dumps(cert.to_json()))
    again = certificate_from_json(data)
    assert again == cert
    verify_certificate(again)

    data["transcript"][0]["decomposition"] = [[-2, 1]]
    with pytest.raises(NormalishFailure, match="differs from the replay"):
        verify_certificate(certificate_from_json(data))

    data = cert.to_json()
    data["witness"] = X0.to_json()
    with pytest.raises(NormalishFailure):
        verify_certificate(certificate_from_json(data))

    data = witness_F_in_T([rotation(Q(1, 2))]).to_json()
    data["interval"] = ["1/2", "3/4"]
    with pytest.raises(NormalishFailure, match="recorded interval"):
        verify_certificate(certificate_from_json(data))


def test_base_generators_commute_with_disjoint_supports():
    gens = {k: base_generator(k) for k in range(-20, 21)}
    for i in gens:
        for j in gens:
            if i < j:
                assert compose(gens[i], gens[j]) == compose(gens[j], gens[i])
                assert support(gens[i]).intersect(support(gens[j])).is_empty()
