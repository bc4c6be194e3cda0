"""Pointwise evaluation and symbolic differentiation."""
from __future__ import annotations

import numpy as np

from .nodes import Add, Div, Expr, Func, Mul, Neg, Num, Pow, Sub, Var

ZERO = Num(0.0)
ONE = Num(1.0)

_UFUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp}


def evaluate(e: Expr, x) -> float | np.ndarray:
    """Evaluate ``e`` at ``x``.

    ``x`` is a length-n vector, or an array of shape ``(..., n)`` in which
    case the result has shape ``(...)``.
    """
    x = np.asarray(x, dtype=float)
    out = _eval(e, x)
    if np.ndim(out) == 0 and x.ndim > 1:
        out = np.full(x.shape[:-1], float(out))
    return float(out) if np.ndim(out) == 0 else out


def _eval(e: Expr, x: np.ndarray):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return x[..., e.index - 1]
    if isinstance(e, Neg):
        return -_eval(e.arg, x)
    if isinstance(e, Add):
        return _eval(e.left, x) + _eval(e.right, x)
    if isinstance(e, Sub):
        return _eval(e.left, x) - _eval(e.right, x)
    if isinstance(e, Mul):
        return _eval(e.left, x) * _eval(e.right, x)
    if isinstance(e, Div):
        den = _eval(e.right, x)
        if np.any(np.asarray(den) == 0.0):
            raise ZeroDivisionError(f"division by zero in {e}")
        return _eval(e.left, x) / den
    if isinstance(e, Pow):
        return _eval(e.base, x) ** e.exponent
    if isinstance(e, Func):
        return _UFUNCS[e.name](_eval(e.arg, x))
    raise TypeError(f"not an expression node: {e!r}")


# -- constructors with constant folding and zero/one elimination ------------

def _is(e: Expr, v: float) -> bool:
    return isinstance(e, Num) and e.value == v


def neg(a: Expr) -> Expr:
    if isinstance(a, Num):
        return Num(-a.value) if a.value != 0 else ZERO
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value + b.value)
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value - b.value)
    if _is(b, 0):
        return a
    if _is(a, 0):
        return neg(b)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    if _is(a, 0) or _is(b, 0):
        return ZERO
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    if _is(a, -1):
        return neg(b)
    if _is(b, -1):
        return neg(a)
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num) and b.value != 0:
        return Num(a.value / b.value)
    if _is(a, 0) and not _is(b, 0):
        return ZERO
    if _is(b, 1):
        return a
    return Div(a, b)


def power(a: Expr, k: int) -> Expr:
    if k == 0:
        return ONE
    if k == 1:
        return a
    if isinstance(a, Num):
        return Num(a.value**k)
    return Pow(a, k)


def differentiate(e: Expr, k: int) -> Expr:
    """Symbolic partial derivative of ``e`` with respect to ``x_k``."""
    if k < 1:
        raise ValueError("variable indices are 1-based")
    return _d(e, k)


def _d(e: Expr, k: int) -> Expr:
    if isinstance(e, Num):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.index == k else ZERO
    if isinstance(e, Neg):
        return neg(_d(e.arg, k))
    if isinstance(e, Add):
        return add(_d(e.left, k), _d(e.right, k))
    if isinstance(e, Sub):
        return sub(_d(e.left, k), _d(e.right, k))
    if isinstance(e, Mul):
        return add(mul(_d(e.left, k), e.right), mul(e.left, _d(e.right, k)))
    if isinstance(e, Div):
        da, db = _d(e.left, k), _d(e.right, k)
        if _is(db, 0):
            return div(da, e.right)
        return div(sub(mul(da, e.right), mul(e.left, db)), power(e.right, 2))
    if isinstance(e, Pow):
        db = _d(e.base, k)
        if e.exponent == 0 or _is(db, 0):
            return ZERO
        return mul(mul(Num(float(e.exponent)), power(e.base, e.exponent - 1)), db)
    if isinstance(e, Func):
        da = _d(e.arg, k)
        if _is(da, 0):
            return ZERO
        if e.name == "sin":
            outer = Func("cos", e.arg)
        elif e.name == "cos":
            outer = neg(Func("sin", e.arg))
        else:
            outer = e
        return mul(outer, da)
    raise TypeError(f"not an expression node: {e!r}")


def hessian(e: Expr, n: int) -> list[list[Expr]]:
    """Symbolic Hessian ``H[r][s] = d^2 e / dx_{r+1} dx_{s+1}``."""
    grad = [differentiate(e, r + 1) for r in range(n)]
    h = [[ZERO] * n for _ in range(n)]
    for r in range(n):
        for s in range(r, n):
            h[r][s] = h[s][r] = differentiate(grad[r], s + 1)
    return h
