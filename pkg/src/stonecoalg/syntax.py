"""Text syntax for functor expressions and value literals.

Functors::

    expr   := sum
    sum    := prod ('+' prod)*          left associative
    prod   := comp ('*' comp)*          left associative
    comp   := atom ('.' comp)?          right associative
    atom   := 'Id' | 'P' | 'Const{' label (',' label)* '}' | '(' expr ')'

Values::

    value  := '{' [value (',' value)*] '}'     finite set
            | '(' value ',' value ')'           pair
            | 'inl' value | 'inr' value         coproduct injection
            | name                              carrier element or label

Names are runs of letters, digits, ``_``, ``'`` and ``-``. The single
character ``ε`` is the empty word (the empty string). Whitespace is ignored
between tokens. ``inl`` and ``inr`` are reserved.
"""
from __future__ import annotations

import re
from typing import Iterable

from .errors import ParseError
from .functor import Compose, Constant, Coproduct, FunctorExpr, Identity, Powerset, Product
from .relation import Relation
from .values import LEFT, RIGHT, Inj, sort_key

EMPTY_WORD = "ε"
_NAME = re.compile(r"[A-Za-z0-9_'\-]+|ε")
_TOKEN = re.compile(r"\s*(?:([A-Za-z0-9_'\-]+|ε)|(\S))")


def _tokens(text: str) -> list[str]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        tok = m.group(1) or m.group(2)
        if tok is not None:
            out.append(tok)
        pos = m.end()
    return out


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            want = expected or "a token"
            raise ParseError(f"expected {want} at token {self.i} in {self.text!r}, got {tok!r}")
        self.i += 1
        return tok

    def done(self) -> None:
        if self.peek() is not None:
            raise ParseError(f"trailing input {self.toks[self.i:]} in {self.text!r}")


# -- functors ---------------------------------------------------------------

def parse_functor(text: str) -> FunctorExpr:
    cur = _Cursor(text)
    f = _sum(cur)
    cur.done()
    return f


def _sum(cur: _Cursor) -> FunctorExpr:
    f = _prod(cur)
    while cur.peek() == "+":
        cur.take()
        f = Coproduct(f, _prod(cur))
    return f


def _prod(cur: _Cursor) -> FunctorExpr:
    f = _comp(cur)
    while cur.peek() == "*":
        cur.take()
        f = Product(f, _comp(cur))
    return f


def _comp(cur: _Cursor) -> FunctorExpr:
    f = _fatom(cur)
    if cur.peek() == ".":
        cur.take()
        return Compose(f, _comp(cur))
    return f


def _fatom(cur: _Cursor) -> FunctorExpr:
    tok = cur.take()
    if tok == "(":
        f = _sum(cur)
        cur.take(")")
        return f
    if tok == "Id":
        return Identity()
    if tok == "P":
        return Powerset()
    if tok == "Const":
        cur.take("{")
        labels = [_name(cur)]
        while cur.peek() == ",":
            cur.take()
            labels.append(_name(cur))
        cur.take("}")
        return Constant(frozenset(labels))
    raise ParseError(f"unknown functor token {tok!r} in {cur.text!r}")


def _name(cur: _Cursor) -> str:
    tok = cur.take()
    if not _NAME.fullmatch(tok) or tok in (LEFT, RIGHT):
        raise ParseError(f"expected a name, got {tok!r} in {cur.text!r}")
    return "" if tok == EMPTY_WORD else tok


# -- values -----------------------------------------------------------------

def parse_value(text: str):
    cur = _Cursor(text)
    v = _value(cur)
    cur.done()
    return v


def _value(cur: _Cursor):
    tok = cur.peek()
    if tok == "{":
        cur.take()
        items = []
        if cur.peek() != "}":
            items.append(_value(cur))
            while cur.peek() == ",":
                cur.take()
                items.append(_value(cur))
        cur.take("}")
        return frozenset(items)
    if tok == "(":
        cur.take()
        a = _value(cur)
        cur.take(",")
        b = _value(cur)
        cur.take(")")
        return (a, b)
    if tok in (LEFT, RIGHT):
        cur.take()
        return Inj(tok, _value(cur))
    return _name(cur)


def render_value(v) -> str:
    """Inverse of :func:`parse_value` for values over string carriers."""
    if isinstance(v, str):
        return EMPTY_WORD if v == "" else v
    if isinstance(v, (int, bool)):
        return str(int(v))
    if isinstance(v, frozenset):
        return "{" + ",".join(render_value(x) for x in sorted(v, key=sort_key)) + "}"
    if isinstance(v, tuple):
        if len(v) != 2:
            raise ValueError("only pairs have a literal form")
        return f"({render_value(v[0])},{render_value(v[1])})"
    if isinstance(v, Inj):
        return f"{v.side} {render_value(v.value)}"
    raise TypeError(f"no literal form for {type(v).__name__}")


def render_relation(r: Relation) -> str:
    return render_value(frozenset(r.pairs))


def parse_relation(text: str, dom: Iterable, cod: Iterable) -> Relation:
    """Parse a set-of-pairs literal such as ``{(a,1),(b,1)}`` over given carriers."""
    v = parse_value(text)
    if not isinstance(v, frozenset) or not all(isinstance(p, tuple) for p in v):
        raise ParseError(f"a relation literal is a set of pairs, got {text!r}")
    return Relation(dom, cod, v)


def parse_carrier(text: str) -> frozenset:
    v = parse_value(text)
    if not isinstance(v, frozenset):
        raise ParseError(f"a carrier literal is a set, got {text!r}")
    return v
