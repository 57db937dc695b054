"""Diagonal nonlinear functions ``f(N_a, N_b)`` and the named catalog.

A :class:`NonlinearFunction` is a closure over the integer occupations
``(n_a, n_b)``.  Equality between functions is only ever checked pointwise on a
probe grid; nothing here is symbolic.

Domain violations surface at evaluation time as
:class:`~tmnlcs.errors.FunctionDomainError` carrying the offending pair.
"""
from __future__ import annotations

import ast
import operator
from dataclasses import dataclass
from typing import Callable

from .errors import FunctionDomainError, UnknownNameError

CATALOG_NAMES = ("unity", "perelomov_full", "perelomov_reduced", "parity_b", "parity_perelomov")


@dataclass(frozen=True)
class NonlinearFunction:
    func: Callable[[int, int], complex]
    label: str

    def __call__(self, n_a: int, n_b: int) -> complex:
        if n_a < 0 or n_b < 0:
            raise FunctionDomainError(n_a, n_b, self.label, "negative occupation")
        try:
            return complex(self.func(n_a, n_b))
        except ZeroDivisionError:
            raise FunctionDomainError(n_a, n_b, self.label, "division by zero") from None

    evaluate = __call__

    def is_zero(self, n_a: int, n_b: int) -> bool:
        """Zero-set guard: does ``f`` vanish at ``(n_a, n_b)``?"""
        return self(n_a, n_b) == 0

    def __repr__(self):
        return f"NonlinearFunction({self.label!r})"


def _parity(n):
    return 1 if n % 2 == 0 else -1


def catalog(name: str, q: int = 0) -> NonlinearFunction:
    """Look up a named function.

    ``q`` is only used by ``perelomov_full``, whose closed form
    ``2/(N_a + N_b + q + 2)`` depends on the charge sector.
    """
    if name == "unity":
        return NonlinearFunction(lambda na, nb: 1.0, "unity")
    if name == "perelomov_full":
        return NonlinearFunction(lambda na, nb: 2.0 / (na + nb + q + 2), f"perelomov_full[q={q}]")
    if name == "perelomov_reduced":
        return NonlinearFunction(lambda na, nb: 1.0 / (na + 1), "perelomov_reduced")
    if name == "parity_b":
        return NonlinearFunction(lambda na, nb: float(_parity(nb)), "parity_b")
    if name == "parity_perelomov":
        return NonlinearFunction(lambda na, nb: _parity(nb) / (na + 1.0), "parity_perelomov")
    raise UnknownNameError(f"unknown nonlinear function {name!r}; choose from {CATALOG_NAMES}")


def shifted(f: NonlinearFunction, da: int, db: int) -> NonlinearFunction:
    """``g(n_a, n_b) = f(n_a + da, n_b + db)``."""
    if da == 0 and db == 0:
        return f
    return NonlinearFunction(lambda na, nb: f(na + da, nb + db), f"{f.label}(Na{da:+d},Nb{db:+d})")


def swapped(f: NonlinearFunction) -> NonlinearFunction:
    """``g(n_a, n_b) = f(n_b, n_a)``: the same function after relabelling the modes."""
    return NonlinearFunction(lambda na, nb: f(nb, na), f"swap({f.label})")


def product(f: NonlinearFunction, g: NonlinearFunction) -> NonlinearFunction:
    return NonlinearFunction(lambda na, nb: f(na, nb) * g(na, nb), f"{f.label}*{g.label}")


def photon_added_function(f: NonlinearFunction, m: int, n: int) -> NonlinearFunction:
    """Function satisfied by ``a^dag^m b^dag^n`` applied to an eigenstate of ``f ab``.

    ``f(N_a - m, N_b - n) (1 - m/(N_a + 1)) (1 - n/(N_b + 1))``.

    The two rational factors are evaluated first; where one of them vanishes
    (``n_a = m - 1`` or ``n_b = n - 1``) the value is zero and the shifted
    ``f`` is not consulted.  This is the rung just below the photon-added
    support, which ``ab`` reaches.
    """
    if m == 0 and n == 0:
        return f
    base = shifted(f, -m, -n)

    def g(na, nb):
        factor = (1.0 - m / (na + 1.0)) * (1.0 - n / (nb + 1.0))
        if factor == 0:
            return 0.0
        return base(na, nb) * factor

    return NonlinearFunction(g, f"{f.label}(Na-{m},Nb-{n})*(1-{m}/(Na+1))*(1-{n}/(Nb+1))")


def photon_subtracted_function(f: NonlinearFunction, m: int, n: int) -> NonlinearFunction:
    """``f(N_a + m, N_b + n)``."""
    return shifted(f, m, n)


# -- expression grammar -------------------------------------------------------
#
#   expr   := expr ('+'|'-') term | term
#   term   := term ('*'|'/') unary | unary
#   unary  := '-' unary | '+' unary | atom
#   atom   := NUMBER | 'na' | 'nb' | 'powneg1' '(' expr ')' | '(' expr ')'
#
# Parsed with the stdlib ``ast`` module and evaluated from a whitelist.

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def _compile(node, text):
    if isinstance(node, ast.Expression):
        return _compile(node.body, text)
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        op = _BINOPS[type(node.op)]
        lhs, rhs = _compile(node.left, text), _compile(node.right, text)
        return lambda na, nb: op(lhs(na, nb), rhs(na, nb))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        op = _UNARY[type(node.op)]
        arg = _compile(node.operand, text)
        return lambda na, nb: op(arg(na, nb))
    if isinstance(node, ast.Constant) and type(node.value) in (int, float):
        value = node.value
        return lambda na, nb: value
    if isinstance(node, ast.Name) and node.id in ("na", "nb"):
        if node.id == "na":
            return lambda na, nb: na
        return lambda na, nb: nb
    if (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id == "powneg1"
        and len(node.args) == 1
        and not node.keywords
    ):
        arg = _compile(node.args[0], text)

        def powneg1(na, nb):
            k = arg(na, nb)
            if k != int(k):
                raise FunctionDomainError(na, nb, text, "powneg1 needs an integer argument")
            return _parity(int(k))

        return powneg1
    raise ValueError(f"unsupported construct in function expression {text!r}: {ast.dump(node)}")


def parse_expression(text: str) -> NonlinearFunction:
    """Build a function from an arithmetic expression over ``na`` and ``nb``.

    >>> parse_expression("powneg1(nb)/(na+1)")(2, 1)
    (-0.3333333333333333+0j)
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse function expression {text!r}: {exc.msg}") from None
    return NonlinearFunction(_compile(tree, text), text.strip())


def resolve(text: str, q: int = 0) -> NonlinearFunction:
    """Catalog name if ``text`` is one, otherwise a parsed expression."""
    if text in CATALOG_NAMES:
        return catalog(text, q)
    return parse_expression(text)
