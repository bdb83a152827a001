"""Exit-criteria checks, shared by ``thompson selftest`` and tests/test_acceptance.py.

Every check is exact.  Each returns a :class:`CriterionResult`; the JSON form
omits timings so that selftest output is byte-identical across runs.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from thompson import analysis, catalog, witness
from thompson.catalog import B, X0, X1, base_generator, base_interval, rotation, transplant
from thompson.exactnum import ClosedSet, IntervalSet, format_rat
from thompson.plhomeo import (
    PLMap,
    commutator,
    compose,
    conjugate,
    evaluate,
    fixed_set,
    invert,
    support,
    validate,
)
from thompson.treepair import TreePair, random_element

Q = Fraction


@dataclass(frozen=True)
class AcceptanceConfig:
    seed: int = 20240601
    group_samples: int = 500
    group_max_leaves: int = 20
    base_range: int = 20
    witness_f_samples: int = 50
    witness_f_max_size: int = 4
    witness_f_max_leaves: int = 25
    witness_t_samples: int = 50
    witness_t_max_size: int = 5
    witness_t_max_leaves: int = 20
    words: int = 1000
    word_max_len: int = 30
    ubiquity_depth: int = 6


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail}

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number}. {self.name} ({self.seconds:.2f}s)"


F4 = PLMap(((Q(0), Q(0)), (Q(1, 8), Q(1, 16)), (Q(3, 16), Q(5, 16)), (Q(1, 2), Q(15, 16)), (Q(1), Q(1))))

# x0 and x1 written directly as trees, so the word-problem backend never touches PL tables
_L = None
X0_PAIR = TreePair(((_L, _L), _L), (_L, (_L, _L)))
X1_PAIR = TreePair((_L, ((_L, _L), _L)), (_L, (_L, (_L, _L))))

# [x0 x1⁻¹, x1^(x0)] and [x0 x1⁻¹, x1^(x0²)], letters 1 = x0, 2 = x1
RELATORS = (
    (2, -1, -1, -2, 1, 1, -2, -1, 2, 1),
    (2, -1, -1, -1, -2, 1, 1, 1, -2, -1, -1, 2, 1, 1),
)


def _random_pl(rng: random.Random, max_leaves: int) -> PLMap:
    return random_element(rng.randint(1, max_leaves), rng.randrange(2 ** 32)).to_plmap()


def check_pinned_constants(cfg: AcceptanceConfig) -> CriterionResult:
    value = evaluate(X0, Q(1, 4))
    supp = support(B)
    ok = value == Q(1, 2) and supp == IntervalSet("interval", ((Q(1, 4), Q(1, 2)),))
    return CriterionResult(1, "pinned constants: 1/4·x0 = 1/2, Supp(b) = (1/4,1/2)", ok,
                           {"x0(1/4)": format_rat(value), "supp_b": supp.to_json()["intervals"]})


def check_group_axioms(cfg: AcceptanceConfig) -> CriterionResult:
    rng = random.Random(cfg.seed + 2)
    failures = []
    for i in range(cfg.group_samples):
        f, g, h = (_random_pl(rng, cfg.group_max_leaves) for _ in range(3))
        fg = compose(f, g)
        checks = {
            "inverse": compose(f, invert(f)).is_identity() and compose(invert(f), f).is_identity(),
            "associativity": compose(fg, h) == compose(f, compose(g, h)),
            "closure": validate(fg, "F") is None and validate(invert(f), "F") is None,
        }
        failures += [(i, name) for name, ok in checks.items() if not ok]
    return CriterionResult(2, "group axioms on random tree-pair elements", not failures,
                           {"samples": cfg.group_samples, "failures": failures[:10]})


def check_wreath_base(cfg: AcceptanceConfig) -> CriterionResult:
    n = cfg.base_range
    idx = range(-n, n + 1)
    gens = {k: base_generator(k) for k in idx}
    supports = {k: support(g) for k, g in gens.items()}
    bad = [k for k in idx
           if gens[k].is_identity() or supports[k].intervals != (base_interval(k),)]
    pairs = 0
    for i in idx:
        for j in idx:
            if i < j:
                pairs += 1
                if not supports[i].intersect(supports[j]).is_empty():
                    bad.append((i, j, "supports meet"))
                if not commutator(gens[i], gens[j]).is_identity():
                    bad.append((i, j, "commutator"))
    return CriterionResult(3, "base generators pairwise disjoint and commuting", not bad,
                           {"generators": len(gens), "pairs": pairs, "failures": bad[:10]})


def check_d_normalish_in_f(cfg: AcceptanceConfig) -> CriterionResult:
    rng = random.Random(cfg.seed + 4)
    failures, indices = [], []
    for trial in range(cfg.witness_f_samples):
        K = [_random_pl(rng, cfg.witness_f_max_leaves)
             for _ in range(rng.randint(1, cfg.witness_f_max_size))]
        cert = witness.witness_in_F(K)
        indices.append(cert.extra["index"])
        try:
            if cert.witness.is_identity():
                raise witness.NormalishFailure(None, "identity witness")
            witness.verify_certificate(cert)
            for entry in cert.transcript:
                if entry.evidence.recompose() != entry.conjugate:
                    raise witness.NormalishFailure(None, "decomposition does not recompose")
        except witness.NormalishFailure as exc:
            failures.append((trial, str(exc)))
    return CriterionResult(4, "D normalish in F: witnesses replay for random K", not failures,
                           {"samples": cfg.witness_f_samples, "failures": failures[:10],
                            "deepest_index": min(indices), "indices": indices})


def _random_t(rng: random.Random, max_leaves: int):
    f = _random_pl(rng, max_leaves).to_circle()
    k = rng.randint(0, 5)
    return compose(f, rotation(Q(rng.randrange(2 ** k), 2 ** k)))


def check_f_normalish_in_t(cfg: AcceptanceConfig) -> CriterionResult:
    rng = random.Random(cfg.seed + 5)
    failures = []
    for trial in range(cfg.witness_t_samples):
        K = [_random_t(rng, cfg.witness_t_max_leaves)
             for _ in range(rng.randint(1, cfg.witness_t_max_size))]
        cert = witness.witness_F_in_T(K)
        lo, hi = (Q(v) for v in cert.extra["interval"])
        S = [Q(v) for v in cert.extra["avoided_points"]]
        closure = ClosedSet.from_components("circle", [(lo, hi)])
        avoided = ClosedSet.from_components("circle", [], S)
        problems = []
        if cert.witness.is_identity():
            problems.append("identity witness")
        if not closure.intersect(avoided).is_empty():
            problems.append("interval closure meets S")
        if any(e.conjugate(0) != 0 for e in cert.transcript):
            problems.append("a conjugate moves 0")
        try:
            witness.verify_certificate(cert)
        except witness.NormalishFailure as exc:
            problems.append(str(exc))
        if problems:
            failures.append((trial, problems))
    return CriterionResult(5, "F normalish in T: witnesses replay for random K", not failures,
                           {"samples": cfg.witness_t_samples, "failures": failures[:10]})


def random_words(cfg: AcceptanceConfig) -> list[tuple[int, ...]]:
    """Half uniformly random words, half conjugated relators (some with one letter flipped)."""
    rng = random.Random(cfg.seed + 6)
    letters = (1, -1, 2, -2)
    words = []
    for i in range(cfg.words):
        if i % 2 == 0:
            words.append(tuple(rng.choice(letters) for _ in range(rng.randint(0, cfg.word_max_len))))
            continue
        rel = rng.choice(RELATORS)
        if rng.random() < 0.5:
            rel = tuple(-x for x in reversed(rel))
        room = (cfg.word_max_len - len(rel)) // 2
        prefix = tuple(rng.choice(letters) for _ in range(rng.randint(0, room)))
        word = list(prefix + rel + tuple(-x for x in reversed(prefix)))
        if rng.random() < 0.25:
            pos = rng.randrange(len(word))
            word[pos] = -word[pos]
        words.append(tuple(word))
    return words


def word_verdicts(word: tuple[int, ...]) -> tuple[bool, bool]:
    """(tree-pair verdict, PL-composition verdict)."""
    pairs = {1: X0_PAIR, -1: X0_PAIR.inverse(), 2: X1_PAIR, -2: X1_PAIR.inverse()}
    maps = {1: X0, -1: invert(X0), 2: X1, -2: invert(X1)}
    tp, pl = TreePair.identity(), PLMap.identity()
    for letter in word:
        tp = tp * pairs[letter]
        pl = compose(pl, maps[letter])
    return tp.is_identity(), pl.is_identity()


def check_word_problem(cfg: AcceptanceConfig) -> CriterionResult:
    words = random_words(cfg)
    backends_agree = X0_PAIR.to_plmap() == X0 and X1_PAIR.to_plmap() == X1
    disagreements, identities = [], 0
    for i, w in enumerate(words):
        tp, pl = word_verdicts(w)
        identities += pl
        if tp != pl:
            disagreements.append(i)
    return CriterionResult(6, "word problem: tree pairs agree with PL composition",
                           backends_agree and not disagreements,
                           {"words": len(words), "identities": identities,
                            "disagreements": disagreements[:10]})


def fixed_points_by_piece(points) -> tuple[list, list]:
    """Independent oracle: solve λx + μ = x on each affine piece of a breakpoint table."""
    whole, isolated = [], set()
    for (xa, ya), (xb, yb) in zip(points, points[1:]):
        lam = (yb - ya) / (xb - xa)
        mu = ya - lam * xa
        if lam == 1:
            if mu == 0:
                whole.append((xa, xb))
            continue
        x = mu / (1 - lam)
        if xa <= x <= xb:
            isolated.add(x)
    isolated = {p for p in isolated if not any(a <= p <= b for a, b in whole)}
    return whole, sorted(isolated)


def check_fixed_set(cfg: AcceptanceConfig) -> CriterionResult:
    oracle_intervals, oracle_points = fixed_points_by_piece(F4.breakpoints)
    intervals, points = fixed_set(F4).components()
    expected = [Q(0), Q(7, 48), Q(1)]
    ok = (not intervals and not oracle_intervals and points == expected and oracle_points == expected)
    return CriterionResult(7, "fixed set of the four-piece element is {0, 7/48, 1}", ok,
                           {"fixed_points": [format_rat(p) for p in points],
                            "oracle": [format_rat(p) for p in oracle_points]})


def check_dynamics(cfg: AcceptanceConfig) -> CriterionResult:
    half = transplant(X0, (Q(0), Q(1, 2)))
    found = analysis.ubiquity_search([X0, half], 1)
    results = {
        "ubiquity_certificate": bool(found) and found.word == (2,) and found.end == "left"
        and (found.orbital.lo, found.orbital.hi) == (0, 1)
        and analysis.replay_ubiquity([X0, half], found),
        "x0_inconclusive": not analysis.ubiquity_search([X0], cfg.ubiquity_depth),
        "b_inconclusive": not analysis.ubiquity_search([B], cfg.ubiquity_depth),
    }
    g1 = transplant(X0, (Q(0), Q(3, 4))).to_circle()
    g2 = conjugate(g1, rotation(Q(1, 2)))
    cert = analysis.free_precondition([g1, g2])
    results["free_certified"] = bool(cert) and analysis.replay_free(cert)
    results["free_rejects_b_pair"] = not analysis.free_precondition([B, base_generator(1)])
    results["free_rejects_rotation"] = all(
        not analysis.free_precondition(gens)
        for gens in ([rotation(Q(1, 2)), X0.to_circle()], [g1, rotation(Q(1, 4))],
                     [g1, g2, rotation(Q(3, 8))]))
    return CriterionResult(8, "ubiquity search and free-subgroup precondition", all(results.values()),
                           results)


CRITERIA: list[Callable[[AcceptanceConfig], CriterionResult]] = [
    check_pinned_constants,
    check_group_axioms,
    check_wreath_base,
    check_d_normalish_in_f,
    check_f_normalish_in_t,
    check_word_problem,
    check_fixed_set,
    check_dynamics,
]


def run_all(cfg: AcceptanceConfig | None = None) -> list[CriterionResult]:
    cfg = cfg or AcceptanceConfig()
    results = []
    for check in CRITERIA:
        start = time.perf_counter()
        result = check(cfg)
        result.seconds = time.perf_counter() - start
        results.append(result)
    return results
