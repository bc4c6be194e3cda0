"""Expression tree nodes and the canonical printer.

Nodes are frozen dataclasses, so structural equality and hashing come for
free and trees can be shared between threads.
"""
from __future__ import annotations

from dataclasses import dataclass

FUNCTIONS = ("sin", "cos", "exp")


class Expr:
    """Base class of all expression nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_string(self)

    def variables(self) -> frozenset[int]:
        """1-based indices of the variables the expression depends on."""
        return _variables(self)


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    index: int  # 1-based


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("exponents must be non-negative integers")


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr

    def __post_init__(self):
        if self.name not in FUNCTIONS:
            raise ValueError(f"unknown function {self.name!r}")


def _variables(e: Expr) -> frozenset[int]:
    if isinstance(e, Var):
        return frozenset((e.index,))
    if isinstance(e, Num):
        return frozenset()
    if isinstance(e, (Neg, Func)):
        return _variables(e.arg)
    if isinstance(e, Pow):
        return _variables(e.base)
    return _variables(e.left) | _variables(e.right)


def _format_number(v: float) -> str:
    if float(v).is_integer() and abs(v) < 1e16:
        text = str(int(v))
    else:
        text = repr(float(v))
    return f"({text})" if v < 0 else text


# precedence levels of the grammar: expr < term < factor < power/atom
_EXPR, _TERM, _FACTOR, _ATOM = range(4)


def _level(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return _EXPR
    if isinstance(e, (Mul, Div)):
        return _TERM
    if isinstance(e, Neg):
        return _FACTOR
    if isinstance(e, Num) and e.value < 0:
        return _FACTOR
    return _ATOM


def _wrap(e: Expr, needed: int) -> str:
    text = to_string(e)
    return f"({text})" if _level(e) < needed else text


def to_string(e: Expr) -> str:
    """Print ``e`` so that parsing the result gives back the same tree."""
    if isinstance(e, Num):
        return _format_number(e.value)
    if isinstance(e, Var):
        return f"x{e.index}"
    if isinstance(e, Func):
        return f"{e.name}({to_string(e.arg)})"
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, _FACTOR)
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _ATOM)}^{e.exponent}"
    if isinstance(e, (Add, Sub)):
        op = "+" if isinstance(e, Add) else "-"
        return f"{_wrap(e.left, _EXPR)}{op}{_wrap(e.right, _TERM)}"
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        return f"{_wrap(e.left, _TERM)}{op}{_wrap(e.right, _FACTOR)}"
    raise TypeError(f"not an expression node: {e!r}")
