"""A small expression language for naming group elements.

Grammar (whitespace insensitive)::

    expr    := factor ('*' factor)*
    factor  := atom ('^' suffix)?
    suffix  := signed-integer | atom
    atom    := ident | literal | '(' expr ')'
    literal := 'pl{' point (',' point)* '}' | 'circ{' point (',' point)* '}'
             | 'rot(' rational ')' | 'transplant(' expr ',[' rational ',' rational '])'
    point   := '(' rational ',' rational ')'
    rational:= ['-'] int ['/' int ['^' int]]

``a * b`` applies a first and then b.  ``g^n`` is a power, ``g^h`` is the
conjugate h⁻¹ g h.  Built-in identifiers: x0, x1, b, id.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Union

from thompson import catalog
from thompson.exactnum import rat
from thompson.plhomeo import (
    CircleMap,
    Element,
    PLMap,
    compose,
    conjugate,
    invert,
    power,
)
from thompson.treepair import TreePair, from_plmap


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        super().__init__(f"{message} at position {pos}" + (f" in {text!r}" if text else ""))


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class Ident:
    name: str


@dataclass(frozen=True)
class Compose:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Power:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Conj:
    base: "Expr"
    by: "Expr"


@dataclass(frozen=True)
class Table:
    carrier: str
    points: tuple[tuple[Fraction, Fraction], ...]


@dataclass(frozen=True)
class Rot:
    amount: Fraction


@dataclass(frozen=True)
class Transplant:
    inner: "Expr"
    lo: Fraction
    hi: Fraction


Expr = Union[Ident, Compose, Power, Conj, Table, Rot, Transplant]

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>\d+)|(?P<sym>[*^(){}\[\],/-]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}",
                                  pos + len(text[pos:]) - len(text[pos:].lstrip()), text)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, value: str | None = None, kind: str | None = None) -> bool:
        k, v, _ = self.tokens[self.i]
        return (value is None or v == value) and (kind is None or k == kind)

    def take(self, value: str | None = None, kind: str | None = None) -> str:
        k, v, pos = self.tokens[self.i]
        if (value is not None and v != value) or (kind is not None and k != kind):
            want = repr(value) if value is not None else kind
            got = repr(v) if v else "end of input"
            raise ExprSyntaxError(f"expected {want}, found {got}", pos, self.text)
        self.i += 1
        return v

    def error(self, message: str):
        raise ExprSyntaxError(message, self.tokens[self.i][2], self.text)

    def parse(self) -> Expr:
        e = self.expr()
        if not self.peek(kind="end"):
            self.error(f"unexpected {self.tokens[self.i][1]!r}")
        return e

    def expr(self) -> Expr:
        e = self.factor()
        while self.peek("*"):
            self.take("*")
            e = Compose(e, self.factor())
        return e

    def factor(self) -> Expr:
        base = self.atom()
        if not self.peek("^"):
            return base
        self.take("^")
        if self.peek("-") or self.peek(kind="int"):
            sign = -1 if self.peek("-") else 1
            if sign < 0:
                self.take("-")
            return Power(base, sign * int(self.take(kind="int")))
        return Conj(base, self.atom())

    def atom(self) -> Expr:
        if self.peek("("):
            self.take("(")
            e = self.expr()
            self.take(")")
            return e
        if not self.peek(kind="name"):
            self.error("expected an identifier, literal or '('")
        name = self.take(kind="name")
        if name in ("pl", "circ") and self.peek("{"):
            return self.table("interval" if name == "pl" else "circle")
        if name == "rot" and self.peek("("):
            self.take("(")
            amount = self.rational()
            self.take(")")
            return Rot(amount)
        if name == "transplant" and self.peek("("):
            self.take("(")
            inner = self.expr()
            self.take(",")
            self.take("[")
            lo = self.rational()
            self.take(",")
            hi = self.rational()
            self.take("]")
            self.take(")")
            return Transplant(inner, lo, hi)
        return Ident(name)

    def table(self, carrier: str) -> Table:
        self.take("{")
        points = [self.point()]
        while self.peek(","):
            self.take(",")
            points.append(self.point())
        self.take("}")
        return Table(carrier, tuple(points))

    def point(self) -> tuple[Fraction, Fraction]:
        self.take("(")
        x = self.rational()
        self.take(",")
        y = self.rational()
        self.take(")")
        return x, y

    def rational(self) -> Fraction:
        sign = 1
        if self.peek("-"):
            self.take("-")
            sign = -1
        num = int(self.take(kind="int"))
        if not self.peek("/"):
            return Fraction(sign * num)
        self.take("/")
        den = int(self.take(kind="int"))
        if self.peek("^"):
            self.take("^")
            den = den ** int(self.take(kind="int"))
        if den == 0:
            self.error("zero denominator")
        return Fraction(sign * num, den)


def parse(text: str) -> Expr:
    return _Parser(text).parse()


BUILTINS: Mapping[str, Element] = {
    "x0": catalog.X0, "x1": catalog.X1, "b": catalog.B, "id": PLMap.identity(),
}


def _unify(f: Element, g: Element) -> tuple[Element, Element]:
    if type(f) is type(g):
        return f, g
    return catalog.circle(f), catalog.circle(g)


def _lookup(name: str, env: Mapping[str, Element] | None) -> Element:
    if env and name in env:
        return env[name]
    if name in BUILTINS:
        return BUILTINS[name]
    raise EvalError(f"unknown identifier {name!r}")


def _literal(e: Expr) -> Element:
    if isinstance(e, Table):
        try:
            return (PLMap if e.carrier == "interval" else CircleMap)(e.points)
        except ValueError as exc:
            raise EvalError(f"invalid breakpoint table: {exc}") from None
    if isinstance(e, Rot):
        try:
            return catalog.rotation(e.amount)
        except ValueError as exc:
            raise EvalError(str(exc)) from None
    raise TypeError(e)


def eval_expr(e: Union[Expr, str], env: Mapping[str, Element] | None = None) -> Element:
    """Evaluate to an exact element; interval maps are promoted when mixed with circle maps."""
    if isinstance(e, str):
        e = parse(e)
    if isinstance(e, Ident):
        return _lookup(e.name, env)
    if isinstance(e, (Table, Rot)):
        return _literal(e)
    if isinstance(e, Compose):
        return compose(*_unify(eval_expr(e.left, env), eval_expr(e.right, env)))
    if isinstance(e, Power):
        return power(eval_expr(e.base, env), e.exponent)
    if isinstance(e, Conj):
        return conjugate(*_unify(eval_expr(e.base, env), eval_expr(e.by, env)))
    if isinstance(e, Transplant):
        inner = eval_expr(e.inner, env)
        if isinstance(inner, CircleMap):
            raise EvalError("transplant needs an interval map, got a circle map")
        try:
            return catalog.transplant(inner, (e.lo, e.hi))
        except ValueError as exc:
            raise EvalError(str(exc)) from None
    raise TypeError(f"not an expression: {e!r}")


def eval_tree_pair(e: Union[Expr, str], env: Mapping[str, Element] | None = None) -> TreePair:
    """Evaluate with tree-pair arithmetic; only leaves of the syntax tree go through PL maps."""
    if isinstance(e, str):
        e = parse(e)

    def leaf(elem: Element) -> TreePair:
        if isinstance(elem, CircleMap):
            if not elem.fixes_zero():
                raise EvalError("tree pairs only represent elements of F")
            elem = elem.to_interval()
        try:
            return from_plmap(elem)
        except ValueError as exc:
            raise EvalError(str(exc)) from None

    def go(node: Expr) -> TreePair:
        if isinstance(node, Compose):
            return go(node.left) * go(node.right)
        if isinstance(node, Power):
            return go(node.base) ** node.exponent
        if isinstance(node, Conj):
            h = go(node.by)
            return h.inverse() * go(node.base) * h
        return leaf(eval_expr(node, env))

    return go(e)


def format_element(g: Element) -> str:
    """Canonical literal text; parse(format_element(g)) evaluates back to g."""
    return str(g)


def bind(lets: list[str], env: dict | None = None) -> dict[str, Element]:
    """Evaluate ``name=expr`` bindings in order; later ones may use earlier ones."""
    env = dict(env or {})
    for item in lets:
        name, sep, text = item.partition("=")
        name = name.strip()
        if not sep or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise EvalError(f"bad binding {item!r}; expected name=expr")
        if name in env or name in BUILTINS or name in ("pl", "circ", "rot", "transplant"):
            raise EvalError(f"{name!r} is already bound")
        env[name] = eval_expr(text, env)
    return env
