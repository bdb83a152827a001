"""Tree-pair diagrams for elements of F.

A binary tree is ``None`` (a leaf) or a pair ``(left, right)`` (a caret).  The
pair (domain, range) encodes the PL map sending the i-th leaf interval of the
domain tree affinely onto the i-th leaf interval of the range tree.

Products are computed purely on trees (common refinement of the middle
trees), independently of :mod:`thompson.plhomeo`, so the two backends can check
each other on the word problem.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from thompson.exactnum import ONE, ZERO
from thompson.plhomeo import PLMap, validate

Tree = Optional[tuple]
LEAF: Tree = None
CARET: Tree = (None, None)


def caret(left: Tree = LEAF, right: Tree = LEAF) -> Tree:
    return (left, right)


def leaf_count(t: Tree) -> int:
    if t is None:
        return 1
    return leaf_count(t[0]) + leaf_count(t[1])


def leaf_partition(t: Tree, lo: Fraction = ZERO, hi: Fraction = ONE) -> list[tuple[Fraction, Fraction]]:
    """Standard dyadic intervals at the leaves of t, left to right."""
    if t is None:
        return [(lo, hi)]
    mid = (lo + hi) / 2
    return leaf_partition(t[0], lo, mid) + leaf_partition(t[1], mid, hi)


def tree_to_str(t: Tree) -> str:
    if t is None:
        return "()"
    return "(" + tree_to_str(t[0]) + tree_to_str(t[1]) + ")"


def tree_from_str(text: str) -> Tree:
    text = "".join(text.split())
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(text) or text[pos] != "(":
            raise ValueError(f"expected '(' at position {pos} in {text!r}")
        pos += 1
        if pos < len(text) and text[pos] == ")":
            pos += 1
            return None
        left = parse()
        right = parse()
        if pos >= len(text) or text[pos] != ")":
            raise ValueError(f"expected ')' at position {pos} in {text!r}")
        pos += 1
        return (left, right)

    tree = parse()
    if pos != len(text):
        raise ValueError(f"trailing characters at position {pos} in {text!r}")
    return tree


def _exposed_carets(t: Tree) -> set[int]:
    """Leaf indices i such that leaves i, i+1 hang from a common caret."""
    found = set()

    def walk(node, offset):
        if node is None:
            return 1
        if node == CARET:
            found.add(offset)
            return 2
        n = walk(node[0], offset)
        return n + walk(node[1], offset + n)

    walk(t, 0)
    return found


def _collapse(t: Tree, index: int) -> Tree:
    """Replace the exposed caret whose left leaf has the given index by a leaf."""
    def go(node, offset):
        if node is None:
            return node, 1
        if node == CARET and offset == index:
            return None, 2
        left, n = go(node[0], offset)
        right, m = go(node[1], offset + n)
        return (left, right), n + m
    return go(t, 0)[0]


def _graft(t: Tree, subtrees: list[Tree]) -> Tree:
    """Replace the leaves of t, left to right, by the given subtrees."""
    it = iter(subtrees)

    def go(node):
        if node is None:
            return next(it)
        return (go(node[0]), go(node[1]))
    return go(t)


def _hanging(small: Tree, big: Tree) -> list[Tree]:
    """Subtrees of ``big`` hanging below the leaves of ``small`` (small must be a prefix)."""
    if small is None:
        return [big]
    if big is None:
        raise ValueError("tree is not a prefix of its refinement")
    return _hanging(small[0], big[0]) + _hanging(small[1], big[1])


def tree_union(a: Tree, b: Tree) -> Tree:
    if a is None:
        return b
    if b is None:
        return a
    return (tree_union(a[0], b[0]), tree_union(a[1], b[1]))


@dataclass(frozen=True)
class TreePair:
    domain: Tree
    range: Tree

    def __post_init__(self):
        if leaf_count(self.domain) != leaf_count(self.range):
            raise ValueError("domain and range trees must have equal leaf counts")

    @classmethod
    def identity(cls) -> "TreePair":
        return cls(LEAF, LEAF)

    @property
    def leaves(self) -> int:
        return leaf_count(self.domain)

    def reduce(self) -> "TreePair":
        d, r = self.domain, self.range
        while True:
            common = _exposed_carets(d) & _exposed_carets(r)
            if not common:
                return TreePair(d, r)
            i = min(common)
            d, r = _collapse(d, i), _collapse(r, i)

    def is_reduced(self) -> bool:
        return not (_exposed_carets(self.domain) & _exposed_carets(self.range))

    def is_identity(self) -> bool:
        return self.reduce() == TreePair.identity()

    def inverse(self) -> "TreePair":
        return TreePair(self.range, self.domain)

    def expand_range(self, target: Tree) -> "TreePair":
        """Equivalent pair whose range tree is ``target`` (a refinement of the range)."""
        extra = _hanging(self.range, target)
        return TreePair(_graft(self.domain, extra), target)

    def __mul__(self, other: "TreePair") -> "TreePair":
        """Apply self, then other."""
        middle = tree_union(self.range, other.domain)
        left = self.expand_range(middle)
        right = other.inverse().expand_range(middle).inverse()
        return TreePair(left.domain, right.range).reduce()

    def __pow__(self, n: int) -> "TreePair":
        base = self if n >= 0 else self.inverse()
        result = TreePair.identity()
        for _ in range(abs(n)):
            result = result * base
        return result

    def to_plmap(self) -> PLMap:
        dom = leaf_partition(self.domain)
        rng = leaf_partition(self.range)
        pts = [(d[0], r[0]) for d, r in zip(dom, rng)] + [(ONE, ONE)]
        return PLMap(tuple(pts))

    def to_json(self) -> dict:
        return {"domain": tree_to_str(self.domain), "range": tree_to_str(self.range)}

    @classmethod
    def from_json(cls, data: dict) -> "TreePair":
        return cls(tree_from_str(data["domain"]), tree_from_str(data["range"]))


def reduce(p: TreePair) -> TreePair:
    return p.reduce()


def to_plmap(p: TreePair) -> PLMap:
    return p.to_plmap()


def _tree_from_leaves(leaves: list[tuple[Fraction, Fraction]], lo: Fraction, hi: Fraction) -> Tree:
    if len(leaves) == 1:
        if leaves[0] != (lo, hi):
            raise ValueError("leaves do not form a standard dyadic partition")
        return None
    mid = (lo + hi) / 2
    k = next((i for i, (a, _) in enumerate(leaves) if a >= mid), None)
    if k is None or leaves[k][0] != mid:
        raise ValueError("leaves do not form a standard dyadic partition")
    return (_tree_from_leaves(leaves[:k], lo, mid), _tree_from_leaves(leaves[k:], mid, hi))


def from_plmap(f: PLMap) -> TreePair:
    """Reduced tree pair of an F-valid map.

    Standard dyadic intervals of the domain are split until f is affine on
    each and sends it onto a standard dyadic interval.
    """
    problem = validate(f, "F")
    if problem is not None or not isinstance(f, PLMap):
        raise ValueError(f"not an element of F: {problem or 'circle map'}")

    def split(lo, hi):
        if any(lo < x < hi for x in f.xs):
            mid = (lo + hi) / 2
            return split(lo, mid) + split(mid, hi)
        a, b = f(lo), f(hi)
        width = b - a
        # the image [a, b] is standard iff its width is 1/2**k and a is a multiple of it
        if width.numerator == 1 and (a / width).denominator == 1:
            return [((lo, hi), (a, b))]
        mid = (lo + hi) / 2
        return split(lo, mid) + split(mid, hi)

    parts = split(ZERO, ONE)
    domain = _tree_from_leaves([d for d, _ in parts], ZERO, ONE)
    range_ = _tree_from_leaves([r for _, r in parts], ZERO, ONE)
    return TreePair(domain, range_).reduce()


def is_identity(x: Union[TreePair, list]) -> bool:
    """Word-problem verdict for a pair or for a list of (pair, exponent) factors."""
    if isinstance(x, TreePair):
        return x.is_identity()
    product = TreePair.identity()
    for pair, exp in x:
        product = product * (pair ** exp)
    return product.is_identity()


@lru_cache(maxsize=None)
def _tree_count(n: int) -> int:
    """Number of binary trees with n leaves (Catalan(n - 1))."""
    if n == 1:
        return 1
    return sum(_tree_count(i) * _tree_count(n - i) for i in range(1, n))


def random_tree(leaves: int, rng: random.Random) -> Tree:
    """Uniformly random binary tree with the given number of leaves."""
    if leaves == 1:
        return None
    r = rng.randrange(_tree_count(leaves))
    for i in range(1, leaves):
        w = _tree_count(i) * _tree_count(leaves - i)
        if r < w:
            return (random_tree(i, rng), random_tree(leaves - i, rng))
        r -= w
    raise AssertionError("unreachable")


def random_element(leaves: int, seed: int) -> TreePair:
    """Pair of two independent uniform random trees with ``leaves`` leaves (not reduced)."""
    if leaves < 1:
        raise ValueError("leaves must be at least 1")
    rng = random.Random(seed)
    return TreePair(random_tree(leaves, rng), random_tree(leaves, rng))
