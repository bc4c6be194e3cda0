"""Recursive-descent parser for dynamics expressions.

Grammar::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | power
    power  := atom ('^' unsigned-int)?
    atom   := number | 'x' unsigned-int | func '(' expr ')' | '(' expr ')'
    func   := 'sin' | 'cos' | 'exp'
"""
from __future__ import annotations

import re

from .nodes import FUNCTIONS, Add, Div, Expr, Func, Mul, Neg, Num, Pow, Sub, Var

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<var>x(?P<idx>\d+))"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


class ExpressionSyntaxError(ValueError):
    """Raised on malformed expression text; ``position`` is a 0-based offset."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while text[pos:].strip():
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            start = len(text) - len(text[pos:].lstrip())
            raise ExpressionSyntaxError(f"unexpected character {text[start]!r}", text, start)
        if m.group("num") is not None:
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("var") is not None:
            tokens.append(("var", m.group("idx"), m.start("var")))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int | None):
        self.text = text
        self.n = n
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message: str):
        raise ExpressionSyntaxError(message, self.text, self.tok[2])

    def accept(self, op: str) -> bool:
        kind, value, _ = self.tok
        if kind == "op" and value == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str):
        if not self.accept(op):
            self.error(f"expected {op!r}")

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok[0] != "end":
            self.error(f"unexpected token {self.tok[1]!r}")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            if self.accept("+"):
                e = Add(e, self.term())
            elif self.accept("-"):
                e = Sub(e, self.term())
            else:
                return e

    def term(self) -> Expr:
        e = self.factor()
        while True:
            if self.accept("*"):
                e = Mul(e, self.factor())
            elif self.accept("/"):
                e = Div(e, self.factor())
            else:
                return e

    def factor(self) -> Expr:
        if self.accept("-"):
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.accept("^"):
            kind, value, _ = self.tok
            if kind != "num" or not value.isdigit():
                self.error("exponent must be an unsigned integer")
            self.i += 1
            return Pow(base, int(value))
        return base

    def atom(self) -> Expr:
        kind, value, pos = self.tok
        if kind == "num":
            self.i += 1
            return Num(float(value))
        if kind == "var":
            k = int(value)
            if k < 1 or (self.n is not None and k > self.n):
                raise ExpressionSyntaxError(
                    f"variable x{k} out of range for dimension {self.n}", self.text, pos
                )
            self.i += 1
            return Var(k)
        if kind == "name":
            if value not in FUNCTIONS:
                self.error(f"unknown function {value!r}")
            self.i += 1
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Func(value, arg)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected token {value!r}")


def parse(text: str, n: int | None = None) -> Expr:
    """Parse ``text`` into an expression over variables ``x1 .. xn``.

    ``^`` binds tighter than unary minus, so ``-x1^2`` is ``-(x1^2)``.
    Passing ``n=None`` skips the variable range check.
    """
    return _Parser(text, n).parse()
