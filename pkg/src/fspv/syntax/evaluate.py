from __future__ import annotations

from collections.abc import Mapping
from typing import Union

from ..errors import DivisionByZero, UnboundVariable
from .tree import Binary, Expr, Name, Num, Unary

_COMPARE = {
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def _trunc_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def eval_expr(expr: Expr, env: Mapping[str, int], consts: Mapping[str, int] = {}) -> Union[int, bool]:
    """Evaluate ``expr`` with variables from ``env`` and constants from ``consts``.

    Division truncates toward zero and ``%`` takes the sign of the dividend.
    ``&&`` and ``||`` short-circuit.
    """
    if isinstance(expr, Num):
        return expr.value
    if isinstance(expr, Name):
        if expr.name in env:
            return env[expr.name]
        if expr.name in consts:
            return consts[expr.name]
        raise UnboundVariable(expr.name)
    if isinstance(expr, Unary):
        v = eval_expr(expr.operand, env, consts)
        return -v if expr.op == "-" else not v
    if isinstance(expr, Binary):
        op = expr.op
        if op == "&&":
            return bool(eval_expr(expr.left, env, consts)) and bool(eval_expr(expr.right, env, consts))
        if op == "||":
            return bool(eval_expr(expr.left, env, consts)) or bool(eval_expr(expr.right, env, consts))
        a = eval_expr(expr.left, env, consts)
        b = eval_expr(expr.right, env, consts)
        if op in _COMPARE:
            return _COMPARE[op](a, b)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if b == 0:
            raise DivisionByZero()
        if op == "/":
            return _trunc_div(a, b)
        if op == "%":
            return a - b * _trunc_div(a, b)
    raise TypeError(f"not an expression: {expr!r}")


def free_names(expr: Expr) -> set[str]:
    """All names mentioned by ``expr`` (variables and constants alike)."""
    if isinstance(expr, Name):
        return {expr.name}
    if isinstance(expr, Unary):
        return free_names(expr.operand)
    if isinstance(expr, Binary):
        return free_names(expr.left) | free_names(expr.right)
    return set()
