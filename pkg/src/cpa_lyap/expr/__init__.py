"""Dynamics expressions: parsing, calculus, interval enclosures."""
from .calculus import differentiate, evaluate, hessian
from .interval import Interval, interval_evaluate, interval_evaluate_many
from .nodes import Add, Div, Expr, Func, Mul, Neg, Num, Pow, Sub, Var, to_string
from .parser import ExpressionSyntaxError, parse
from .system import DecompositionError, SystemModel, UnivariateComponent, decompose_univariate

__all__ = [
    "Add", "Div", "Expr", "Func", "Mul", "Neg", "Num", "Pow", "Sub", "Var",
    "DecompositionError", "ExpressionSyntaxError", "Interval", "SystemModel",
    "UnivariateComponent", "decompose_univariate", "differentiate", "evaluate",
    "hessian", "interval_evaluate", "interval_evaluate_many", "parse", "to_string",
]
