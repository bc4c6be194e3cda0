"""Dynamical system models and their univariate decomposition."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .calculus import differentiate, evaluate, hessian, mul
from .nodes import Add, Div, Expr, Mul, Neg, Num, Sub, to_string
from .parser import parse

EQUILIBRIUM_TOL = 1e-9


@dataclass(frozen=True)
class SystemModel:
    """Autonomous system ``dx/dt = f(x)`` on a box containing the origin.

    Construct with :meth:`from_strings` to parse the component expressions.
    """

    components: tuple[Expr, ...]
    domain: tuple[tuple[float, float], ...]
    name: str = "system"

    def __post_init__(self):
        n = len(self.components)
        if n == 0:
            raise ValueError("a system needs at least one component")
        if len(self.domain) != n:
            raise ValueError(f"domain has {len(self.domain)} intervals for {n} components")
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "domain", tuple((float(a), float(b)) for a, b in self.domain))
        for q, comp in enumerate(self.components):
            bad = [k for k in comp.variables() if not 1 <= k <= n]
            if bad:
                raise ValueError(f"component {q + 1} references x{bad[0]} but n={n}")
        for k, (a, b) in enumerate(self.domain):
            if not a < 0.0 < b:
                raise ValueError(f"origin is not interior to the domain on axis {k + 1}")
        f0 = self.f(np.zeros(n))
        if np.max(np.abs(f0)) > EQUILIBRIUM_TOL:
            raise ValueError(f"f(0) = {f0.tolist()} is not the zero vector")

    @classmethod
    def from_strings(cls, dynamics: Sequence[str], domain, name: str = "system") -> SystemModel:
        n = len(dynamics)
        return cls(tuple(parse(s, n) for s in dynamics), tuple(map(tuple, domain)), name)

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def lower(self) -> np.ndarray:
        return np.array([a for a, _ in self.domain])

    @property
    def upper(self) -> np.ndarray:
        return np.array([b for _, b in self.domain])

    def f(self, x) -> np.ndarray:
        """Vector field at ``x``; ``x`` of shape ``(n,)`` or ``(m, n)``."""
        x = np.asarray(x, dtype=float)
        return np.stack([np.broadcast_to(evaluate(c, x), x.shape[:-1]) for c in self.components], axis=-1)

    @cached_property
    def hessians(self) -> list[list[list[Expr]]]:
        """Symbolic second partials ``hessians[q][r][s]`` of every component."""
        return [hessian(c, self.n) for c in self.components]

    def dynamics_strings(self) -> list[str]:
        return [to_string(c) for c in self.components]


@dataclass(frozen=True)
class UnivariateComponent:
    variable: int  # 1-based axis index
    expr: Expr
    source: int  # 1-based output component index


class DecompositionError(ValueError):
    """The dynamics are not sums of products of univariate factors."""


def _terms(e: Expr):
    # signs are irrelevant: only the variables in each factor matter
    if isinstance(e, (Add, Sub)):
        yield from _terms(e.left)
        yield from _terms(e.right)
    elif isinstance(e, Neg):
        yield from _terms(e.arg)
    else:
        yield e


def _factors(e: Expr):
    if isinstance(e, Mul):
        yield from _factors(e.left)
        yield from _factors(e.right)
    elif isinstance(e, Neg):
        yield from _factors(e.arg)
    elif isinstance(e, Div) and not e.right.variables():
        yield from _factors(e.left)
    elif isinstance(e, Div) and not e.left.variables():
        yield Div(Num(1.0), e.right)
    elif isinstance(e, Div):
        yield from _factors(e.left)
        yield Div(Num(1.0), e.right)
    else:
        yield e


def _is_affine(g: Expr, k: int) -> bool:
    second = differentiate(differentiate(g, k), k)
    return isinstance(second, Num) and second.value == 0.0


def decompose_univariate(model: SystemModel) -> list[UnivariateComponent]:
    """Every distinct non-affine univariate factor of the dynamics.

    Each component must be a sum of terms, each term a constant times
    univariate factors. Factors of one term sharing a variable are merged
    into a single univariate function. Raises :class:`DecompositionError`
    on anything else, e.g. ``sin(x1 + x2)``.
    """
    found: list[UnivariateComponent] = []
    seen: set[tuple[int, Expr]] = set()
    for q, comp in enumerate(model.components, start=1):
        for term in _terms(comp):
            by_var: dict[int, Expr] = {}
            for fac in _factors(term):
                vs = fac.variables()
                if not vs:
                    continue
                if len(vs) > 1:
                    raise DecompositionError(
                        f"factor {to_string(fac)} of component {q} depends on several variables"
                    )
                (k,) = vs
                by_var[k] = mul(by_var[k], fac) if k in by_var else fac
            for k in sorted(by_var):
                g = by_var[k]
                if _is_affine(g, k) or (k, g) in seen:
                    continue
                seen.add((k, g))
                found.append(UnivariateComponent(k, g, q))
    return found
