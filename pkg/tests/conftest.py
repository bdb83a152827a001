import sys
from fractions import Fraction

from hypothesis import settings, strategies as st

from thompson.exactnum import IntervalSet
from thompson.treepair import random_element

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

BIG = 2 ** 128


@st.composite
def rationals(draw, bound=BIG):
    return Fraction(draw(st.integers(-bound, bound)), draw(st.integers(1, bound)))


@st.composite
def unit_rationals(draw, max_den=64):
    den = draw(st.integers(1, max_den))
    return Fraction(draw(st.integers(0, den)), den)


@st.composite
def f_elements(draw, max_leaves=20):
    leaves = draw(st.integers(1, max_leaves))
    seed = draw(st.integers(0, 2 ** 32))
    return random_element(leaves, seed).to_plmap()


@st.composite
def tree_pairs(draw, max_leaves=30):
    return random_element(draw(st.integers(1, max_leaves)), draw(st.integers(0, 2 ** 32)))


@st.composite
def dyadic_targets(draw, depth=6):
    k = draw(st.integers(1, depth))
    a = draw(st.integers(0, 2 ** k - 1))
    b = draw(st.integers(a + 1, 2 ** k))
    return Fraction(a, 2 ** k), Fraction(b, 2 ** k)


@st.composite
def interval_sets(draw, carrier="interval"):
    pts = draw(st.lists(unit_rationals(16), min_size=0, max_size=8))
    pairs = [(min(a, b), max(a, b)) for a, b in zip(pts[::2], pts[1::2])]
    wrap = carrier == "circle" and draw(st.booleans())
    if wrap:
        pairs += [(Fraction(0), Fraction(1, 32)), (Fraction(31, 32), Fraction(1))]
    return IntervalSet.from_intervals(carrier, pairs, wrap)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
