"""A small text language for eventually periodic sets.

Grammar (whitespace is ignored between tokens)::

    set    := diff (('+' | '|') diff)*          union
    diff   := inter ('\\' inter)*                difference
    inter  := factor ('&' factor)*              intersection
    factor := '~' factor                        complement
            | INT '*' factor ('+' INT)?         affine image k*S + h
            | atom
    atom   := 'AP(' INT ',' INT ')' | 'N' | 'EMPTY'
            | '{' INT (',' INT)* '}' | '(' set ')'

``AP(k, h)`` is ``{k*t + h : t >= 0}``.  In ``k*S + h`` the ``+ h`` is read
as a shift only when ``h`` is not itself followed by ``*``, so
``2*N + 3*N`` is a union of two dilations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .apset import (
    EMPTY,
    NAT,
    APSet,
    affine,
    complement,
    difference,
    intersect,
    union,
)


class DSLSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.message = message
        self.offset = offset


@dataclass(frozen=True)
class APAtom:
    k: int
    h: int


@dataclass(frozen=True)
class NatAtom:
    pass


@dataclass(frozen=True)
class EmptyAtom:
    pass


@dataclass(frozen=True)
class FiniteAtom:
    elements: tuple[int, ...]


@dataclass(frozen=True)
class UnionExpr:
    left: "SetExpr"
    right: "SetExpr"


@dataclass(frozen=True)
class Intersection:
    left: "SetExpr"
    right: "SetExpr"


@dataclass(frozen=True)
class Difference:
    left: "SetExpr"
    right: "SetExpr"


@dataclass(frozen=True)
class Complement:
    operand: "SetExpr"


@dataclass(frozen=True)
class Affine:
    operand: "SetExpr"
    k: int
    h: int = 0


SetExpr = Union[
    APAtom, NatAtom, EmptyAtom, FiniteAtom, UnionExpr, Intersection, Difference,
    Complement, Affine,
]


# ---------------------------------------------------------------------------
# tokenizer

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<word>AP|EMPTY|N)|(?P<sym>[(){},+|\\&~*]))"
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # "int", "word", "sym", "eof"
    text: str
    offset: int  # byte offset into the UTF-8 encoding

    @property
    def value(self) -> int:
        return int(self.text)


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    byte_of = _byte_offsets(text)
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            toks.append(_Tok("eof", "", byte_of(pos)))
            return toks
        mt = _TOKEN.match(text, pos)
        if mt is None:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", byte_of(pos))
        kind = mt.lastgroup
        toks.append(_Tok(kind, mt.group(kind), byte_of(mt.start(kind))))
        pos = mt.end()


def _byte_offsets(text: str):
    if text.isascii():
        return lambda i: i
    return lambda i: len(text[:i].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, ahead: int = 0) -> _Tok:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def at(self, text: str, ahead: int = 0) -> bool:
        tok = self.peek(ahead)
        return tok.kind in ("sym", "word") and tok.text == text

    def expect(self, text: str) -> _Tok:
        tok = self.peek()
        if not self.at(text):
            found = tok.text or "end of input"
            raise DSLSyntaxError(f"expected {text!r}, found {found!r}", tok.offset)
        return self.take()

    def expect_int(self) -> _Tok:
        tok = self.peek()
        if tok.kind != "int":
            found = tok.text or "end of input"
            raise DSLSyntaxError(f"expected integer, found {found!r}", tok.offset)
        return self.take()

    # grammar

    def parse(self) -> SetExpr:
        expr = self.set_()
        tok = self.peek()
        if tok.kind != "eof":
            raise DSLSyntaxError(f"unexpected {tok.text!r}", tok.offset)
        return expr

    def set_(self) -> SetExpr:
        expr = self.diff()
        while self.at("+") or self.at("|"):
            self.take()
            expr = UnionExpr(expr, self.diff())
        return expr

    def diff(self) -> SetExpr:
        expr = self.inter()
        while self.at("\\"):
            self.take()
            expr = Difference(expr, self.inter())
        return expr

    def inter(self) -> SetExpr:
        expr = self.factor()
        while self.at("&"):
            self.take()
            expr = Intersection(expr, self.factor())
        return expr

    def factor(self) -> SetExpr:
        if self.at("~"):
            self.take()
            return Complement(self.factor())
        if self.peek().kind == "int":
            ktok = self.take()
            if ktok.value < 1:
                raise DSLSyntaxError("dilation factor must be positive", ktok.offset)
            self.expect("*")
            operand = self.factor()
            h = 0
            if self.at("+") and self.peek(1).kind == "int" and not self.at("*", 2):
                self.take()
                h = self.take().value
            return Affine(operand, ktok.value, h)
        return self.atom()

    def atom(self) -> SetExpr:
        tok = self.peek()
        if self.at("AP"):
            self.take()
            self.expect("(")
            ktok = self.expect_int()
            if ktok.value < 1:
                raise DSLSyntaxError("non-positive modulus in AP atom", ktok.offset)
            self.expect(",")
            htok = self.expect_int()
            self.expect(")")
            return APAtom(ktok.value, htok.value)
        if self.at("N"):
            self.take()
            return NatAtom()
        if self.at("EMPTY"):
            self.take()
            return EmptyAtom()
        if self.at("{"):
            self.take()
            elems = [self.expect_int().value]
            while self.at(","):
                self.take()
                elems.append(self.expect_int().value)
            self.expect("}")
            return FiniteAtom(tuple(elems))
        if self.at("("):
            self.take()
            expr = self.set_()
            self.expect(")")
            return expr
        found = tok.text or "end of input"
        raise DSLSyntaxError(f"expected a set, found {found!r}", tok.offset)


def parse_set_expr(text: str) -> SetExpr:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# semantics


def normalize(expr: SetExpr) -> APSet:
    """Evaluate an expression (or DSL text) to its canonical :class:`APSet`."""
    if isinstance(expr, str):
        expr = parse_set_expr(expr)
    match expr:
        case APAtom(k, h):
            return affine(NAT, k, h)
        case NatAtom():
            return NAT
        case EmptyAtom():
            return EMPTY
        case FiniteAtom(elements):
            return APSet.finite(elements)
        case UnionExpr(left, right):
            return union(normalize(left), normalize(right))
        case Intersection(left, right):
            return intersect(normalize(left), normalize(right))
        case Difference(left, right):
            return difference(normalize(left), normalize(right))
        case Complement(operand):
            return complement(normalize(operand))
        case Affine(operand, k, h):
            return affine(normalize(operand), k, h)
    raise TypeError(f"not a set expression: {expr!r}")


def expr_contains(expr: SetExpr, x: int) -> bool:
    """Membership read directly off the expression tree."""
    match expr:
        case APAtom(k, h):
            return x >= h and (x - h) % k == 0
        case NatAtom():
            return x >= 0
        case EmptyAtom():
            return False
        case FiniteAtom(elements):
            return x in elements
        case UnionExpr(left, right):
            return expr_contains(left, x) or expr_contains(right, x)
        case Intersection(left, right):
            return expr_contains(left, x) and expr_contains(right, x)
        case Difference(left, right):
            return expr_contains(left, x) and not expr_contains(right, x)
        case Complement(operand):
            return x >= 0 and not expr_contains(operand, x)
        case Affine(operand, k, h):
            return x >= h and (x - h) % k == 0 and expr_contains(operand, (x - h) // k)
    raise TypeError(f"not a set expression: {expr!r}")


def parse_apset(text: str) -> APSet:
    return normalize(parse_set_expr(text))


def format_apset(a: APSet) -> str:
    """Render a set as DSL text that parses back to the same set."""
    if a.is_finite():
        if not a.added:
            return "EMPTY"
        return _braces(a.added)
    if a.modulus == 1:
        text = "N"
    else:
        text = " + ".join(f"AP({a.modulus},{r})" for r in a.residues)
    if a.removed:
        if a.residue_count > 1:
            text = f"({text})"
        text = f"{text} \\ {_braces(a.removed)}"
    if a.added:
        text = f"{text} + {_braces(a.added)}"
    return text


def _braces(elems) -> str:
    return "{" + ",".join(map(str, sorted(elems))) + "}"
