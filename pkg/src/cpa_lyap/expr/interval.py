"""Sound interval enclosures of expressions.

Every primitive rounds outward (``np.nextafter``), so the returned bounds
contain the exact real range and not just the floating-point one. All
routines are vectorised: ``lo``/``hi`` may be arrays holding many boxes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .nodes import Add, Div, Expr, Func, Mul, Neg, Num, Pow, Sub, Var

_TWO_PI = 2.0 * math.pi
# slack used when deciding whether a critical point of sin/cos is enclosed
_CRIT_SLACK = 1e-12


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def magnitude(self) -> float:
        """Largest absolute value in the interval."""
        return max(abs(self.lo), abs(self.hi))

    def __add__(self, other):
        return _wrap(_add(*_pair(self), *_pair(other)))

    def __sub__(self, other):
        return _wrap(_sub(*_pair(self), *_pair(other)))

    def __mul__(self, other):
        return _wrap(_mul(*_pair(self), *_pair(other)))

    def __truediv__(self, other):
        return _wrap(_div(*_pair(self), *_pair(other)))

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __pow__(self, k: int):
        return _wrap(_pow(*_pair(self), k))


def _pair(v):
    if isinstance(v, Interval):
        return np.float64(v.lo), np.float64(v.hi)
    return np.float64(v), np.float64(v)


def _wrap(lohi) -> Interval:
    return Interval(float(lohi[0]), float(lohi[1]))


def _down(v, ulps: int = 1):
    for _ in range(ulps):
        v = np.nextafter(v, -np.inf)
    return v


def _up(v, ulps: int = 1):
    for _ in range(ulps):
        v = np.nextafter(v, np.inf)
    return v


def _add(alo, ahi, blo, bhi):
    return _down(alo + blo), _up(ahi + bhi)


def _sub(alo, ahi, blo, bhi):
    return _down(alo - bhi), _up(ahi - blo)


def _mul(alo, ahi, blo, bhi):
    p = np.stack(np.broadcast_arrays(alo * blo, alo * bhi, ahi * blo, ahi * bhi))
    # 0 * inf never arises: all inputs are finite on a bounded box
    return _down(p.min(axis=0)), _up(p.max(axis=0))


def _div(alo, ahi, blo, bhi):
    if np.any((blo <= 0.0) & (bhi >= 0.0)):
        raise ZeroDivisionError("interval divisor contains zero")
    rlo, rhi = _down(1.0 / bhi), _up(1.0 / blo)
    return _mul(alo, ahi, rlo, rhi)


def _pow(lo, hi, k: int):
    if k == 0:
        one = np.ones_like(np.asarray(lo, dtype=float))
        return one, one
    plo, phi = lo**k, hi**k
    if k % 2:
        return _down(plo, 2), _up(phi, 2)
    straddle = (lo < 0.0) & (hi > 0.0)
    rlo = np.where(straddle, 0.0, np.minimum(plo, phi))
    rhi = np.maximum(plo, phi)
    return np.maximum(_down(rlo, 2), 0.0), _up(rhi, 2)


def _contains_point(lo, hi, offset):
    """Whether ``[lo, hi]`` contains some ``offset + 2*pi*j``."""
    j = np.ceil((lo - _CRIT_SLACK - offset) / _TWO_PI)
    return offset + _TWO_PI * j <= hi + _CRIT_SLACK


def _sin(lo, hi):
    slo, shi = np.sin(lo), np.sin(hi)
    rlo = _down(np.minimum(slo, shi), 2)
    rhi = _up(np.maximum(slo, shi), 2)
    wide = (hi - lo) >= _TWO_PI
    rhi = np.where(wide | _contains_point(lo, hi, math.pi / 2), 1.0, rhi)
    rlo = np.where(wide | _contains_point(lo, hi, -math.pi / 2), -1.0, rlo)
    return np.maximum(rlo, -1.0), np.minimum(rhi, 1.0)


def _cos(lo, hi):
    clo, chi = np.cos(lo), np.cos(hi)
    rlo = _down(np.minimum(clo, chi), 2)
    rhi = _up(np.maximum(clo, chi), 2)
    wide = (hi - lo) >= _TWO_PI
    rhi = np.where(wide | _contains_point(lo, hi, 0.0), 1.0, rhi)
    rlo = np.where(wide | _contains_point(lo, hi, math.pi), -1.0, rlo)
    return np.maximum(rlo, -1.0), np.minimum(rhi, 1.0)


def _exp(lo, hi):
    return np.maximum(_down(np.exp(lo), 2), 0.0), _up(np.exp(hi), 2)


_FUNCS = {"sin": _sin, "cos": _cos, "exp": _exp}


def _ieval(e: Expr, lo: np.ndarray, hi: np.ndarray):
    if isinstance(e, Num):
        v = np.full(lo.shape[:-1], e.value)
        return v, v.copy()
    if isinstance(e, Var):
        return lo[..., e.index - 1], hi[..., e.index - 1]
    if isinstance(e, Neg):
        a, b = _ieval(e.arg, lo, hi)
        return -b, -a
    if isinstance(e, Pow):
        return _pow(*_ieval(e.base, lo, hi), e.exponent)
    if isinstance(e, Func):
        return _FUNCS[e.name](*_ieval(e.arg, lo, hi))
    left = _ieval(e.left, lo, hi)
    right = _ieval(e.right, lo, hi)
    if isinstance(e, Add):
        return _add(*left, *right)
    if isinstance(e, Sub):
        return _sub(*left, *right)
    if isinstance(e, Mul):
        return _mul(*left, *right)
    if isinstance(e, Div):
        return _div(*left, *right)
    raise TypeError(f"not an expression node: {e!r}")


def interval_evaluate_many(e: Expr, lo, hi) -> tuple[np.ndarray, np.ndarray]:
    """Enclose ``e`` over many boxes at once.

    ``lo`` and ``hi`` have shape ``(m, n)``; returns two arrays of shape ``(m,)``.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if lo.shape != hi.shape or lo.ndim != 2:
        raise ValueError("lo and hi must both have shape (m, n)")
    if np.any(lo > hi):
        raise ValueError("box with lo > hi")
    rlo, rhi = _ieval(e, lo, hi)
    return np.broadcast_to(rlo, lo.shape[:1]).copy(), np.broadcast_to(rhi, lo.shape[:1]).copy()


def interval_evaluate(e: Expr, box: Sequence) -> Interval:
    """Enclosure of ``{e(x) : x in box}``; ``box`` holds Intervals or (lo, hi) pairs."""
    bounds = [(b.lo, b.hi) if isinstance(b, Interval) else tuple(b) for b in box]
    lo = np.array([[b[0] for b in bounds]], dtype=float)
    hi = np.array([[b[1] for b in bounds]], dtype=float)
    rlo, rhi = interval_evaluate_many(e, lo, hi)
    return Interval(float(rlo[0]), float(rhi[0]))
