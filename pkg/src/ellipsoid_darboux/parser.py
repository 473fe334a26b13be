"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom (('^' | '**') unary)?
    atom   := INTEGER | 'I' | IDENT | '(' expr ')'

Division is only allowed by coordinate-free expressions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .coeffs import CoeffValue
from .poly import MultiPoly

__all__ = ["ParseError", "ExpressionContext", "parse_expression"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    def __init__(self, message: str, source: str = "", position: int = 0):
        self.source = source
        self.position = position
        where = f" at position {position}" if source else ""
        super().__init__(f"{message}{where}" + (f": {source!r}" if source else ""))


@dataclass(frozen=True)
class ExpressionContext:
    coordinates: tuple[str, ...]
    parameters: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        object.__setattr__(self, "parameters", tuple(sorted(self.parameters)))
        clash = set(self.coordinates) & set(self.parameters)
        if clash:
            raise ValueError(f"names used as both coordinate and parameter: {sorted(clash)}")
        if "I" in self.coordinates or "I" in self.parameters:
            raise ValueError("'I' is reserved for the imaginary unit")


def _tokenize(src: str):
    pos = 0
    out = []
    src = src.rstrip()
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise ParseError("unexpected character", src, pos)
        start = m.start(m.lastindex)
        out.append((m.group(m.lastindex), m.lastindex, start))
        pos = m.end()
    out.append(("", 0, len(src)))
    return out


class _Parser:
    def __init__(self, src: str, ctx: ExpressionContext):
        self.src = src
        self.ctx = ctx
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, text=None):
        tok = self.toks[self.i]
        if text is not None and tok[0] != text:
            raise ParseError(f"expected {text!r}", self.src, tok[2])
        self.i += 1
        return tok

    def const(self, value) -> MultiPoly:
        return MultiPoly.constant(self.ctx.coordinates, value)

    def parse(self) -> MultiPoly:
        if self.peek()[1] == 0:
            raise ParseError("empty expression", self.src, 0)
        node = self.expr()
        tok = self.peek()
        if tok[1] != 0:
            raise ParseError(f"unexpected token {tok[0]!r}", self.src, tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            rhs = self.unary()
            if op == "*":
                node = node * rhs
            else:
                if not rhs.is_constant():
                    raise ParseError("coordinate in denominator", self.src, pos)
                if rhs.is_zero():
                    raise ParseError("division by zero", self.src, pos)
                node = node / rhs.constant_term()
        return node

    def unary(self):
        if self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            node = self.unary()
            return -node if op == "-" else node
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] in ("^", "**"):
            _, _, pos = self.take()
            exp = self.unary()
            if not exp.is_constant():
                raise ParseError("exponent must be a constant", self.src, pos)
            value = exp.constant_term()
            try:
                re_, im_ = value.parts()
            except ValueError:
                raise ParseError("exponent must be a number", self.src, pos) from None
            if im_ != 0 or re_.denominator != 1 or re_ < 0:
                raise ParseError("exponent must be a non-negative integer", self.src, pos)
            return base ** int(re_)
        return base

    def atom(self):
        text, kind, pos = self.take()
        if kind == 1:
            return self.const(int(text))
        if kind == 2:
            if text == "I":
                return self.const(CoeffValue.i())
            if text in self.ctx.coordinates:
                return MultiPoly.var(self.ctx.coordinates, text)
            if text in self.ctx.parameters:
                return self.const(CoeffValue.parameter(text, self.ctx.parameters))
            raise ParseError(f"unknown identifier {text!r}", self.src, pos)
        if text == "(":
            node = self.expr()
            self.take(")")
            return node
        if kind == 0:
            raise ParseError("unexpected end of expression", self.src, pos)
        raise ParseError(f"unexpected token {text!r}", self.src, pos)


def parse_expression(src: str, context: ExpressionContext | Sequence[str], parameters: Sequence[str] = ()) -> MultiPoly:
    """Parse ``src`` into an exact :class:`MultiPoly`.

    ``context`` is either an :class:`ExpressionContext` or the coordinate names
    (with ``parameters`` given separately).
    """
    if not isinstance(context, ExpressionContext):
        context = ExpressionContext(tuple(context), tuple(parameters))
    return _Parser(src, context).parse()
