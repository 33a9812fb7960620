"""Closed-form expressions in one variable ``t``.

Grammar::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := primary ('^' unary)?
    primary := NUMBER | 'pi' | 'e' | 't' | FUNC '(' expr ')' | '(' expr ')'

``^`` is right-associative and binds tighter than a leading minus, so
``-t^2`` is ``-(t^2)``.  Exponents must reduce to constants.

Evaluation accepts scalars or numpy arrays for ``t``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, ParseError

FUNCTIONS = ("sin", "cos", "sinh", "cosh", "exp", "log", "sqrt")
CONSTANTS = {"pi": math.pi, "e": math.e}


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or one of FUNCTIONS
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: float


Expr = Union[Const, Var, Unary, BinOp, Pow]

T = Var()
ZERO = Const(0.0)
ONE = Const(1.0)


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int  # byte offset


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    i = 0
    while i < len(src):
        m = _TOKEN.match(src, i)
        if m is None:
            raise ParseError(_offset(src, i), f"unexpected character {src[i]!r}")
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), _offset(src, i)))
        i = m.end()
    toks.append(_Tok("end", "", _offset(src, len(src))))
    return toks


def _offset(src: str, i: int) -> int:
    return len(src[:i].encode("utf-8"))


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> None:
        if self.tok.text != text or self.tok.kind == "end":
            found = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            raise ParseError(self.tok.pos, f"expected {text!r}, found {found}")
        self.take()

    def parse(self) -> Expr:
        if self.tok.kind == "end":
            raise ParseError(0, "empty expression")
        node = self.expr()
        if self.tok.kind != "end":
            msg = "unbalanced ')'" if self.tok.text == ")" else f"unexpected {self.tok.text!r}"
            raise ParseError(self.tok.pos, msg)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.take().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take().text
            arg = self.unary()
            return Unary("neg", arg) if op == "-" else arg
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.tok.kind == "op" and self.tok.text == "^":
            caret = self.take()
            exponent = simplify(self.unary())
            if not isinstance(exponent, Const):
                raise ParseError(caret.pos, "exponent must be a constant")
            return Pow(base, exponent.value)
        return base

    def primary(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.take()
            return Const(float(tok.text))
        if tok.kind == "name":
            self.take()
            if tok.text == "t":
                return T
            if tok.text in CONSTANTS:
                return Const(CONSTANTS[tok.text])
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(tok.text, arg)
            raise ParseError(tok.pos, f"unknown name {tok.text!r}")
        if tok.kind == "op" and tok.text == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "end":
            raise ParseError(tok.pos, "unexpected end of input")
        raise ParseError(tok.pos, f"unexpected {tok.text!r}")


def parse_expression(src: str) -> Expr:
    return _Parser(src).parse()


# --------------------------------------------------------------------------
# printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_text(node: Expr) -> str:
    """Render ``node`` so that ``parse_expression`` rebuilds an equivalent tree."""
    return _text(node, 0)


def _text(node: Expr, ctx: int) -> str:
    if isinstance(node, Const):
        s = repr(float(node.value))
        if node.value < 0 or s in ("inf", "-inf", "nan"):
            return f"({s})"
        return s
    if isinstance(node, Var):
        return "t"
    if isinstance(node, Unary):
        if node.op == "neg":
            s = "-" + _text(node.arg, 3)
            return f"({s})" if ctx > 0 else s
        return f"{node.op}({_text(node.arg, 0)})"
    if isinstance(node, Pow):
        base = _text(node.base, 4)
        if isinstance(node.base, Pow):
            base = f"({base})"
        return f"{base}^({node.exponent!r})"
    p = _PREC[node.op]
    # right operand of - and / needs parentheses at equal precedence
    s = f"{_text(node.left, p)} {node.op} {_text(node.right, p + 1)}"
    return f"({s})" if p < ctx else s


# --------------------------------------------------------------------------
# evaluation

def eval_expr(node: Expr, t):
    """Evaluate ``node`` at ``t`` (scalar or array).

    Raises DomainError for log of a non-positive number, sqrt of a negative
    number, division by zero, or any non-finite result.
    """
    with np.errstate(all="ignore"):
        out = _eval(node, np.asarray(t, dtype=float))
    if not np.all(np.isfinite(out)):
        raise DomainError(f"non-finite value evaluating {to_text(node)}")
    return out if np.ndim(out) else float(out)


def _fail(what: str, t, bad) -> None:
    where = np.asarray(t)[bad] if np.ndim(t) and np.ndim(bad) else t
    raise DomainError(f"{what} at t={np.ravel(where)[:3]}")


def _eval(node: Expr, t: np.ndarray):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return t
    if isinstance(node, Unary):
        a = _eval(node.arg, t)
        op = node.op
        if op == "neg":
            return -a
        if op == "log":
            bad = np.asarray(a) <= 0
            if np.any(bad):
                _fail("log of non-positive value", t, bad)
            return np.log(a)
        if op == "sqrt":
            bad = np.asarray(a) < 0
            if np.any(bad):
                _fail("sqrt of negative value", t, bad)
            return np.sqrt(a)
        return getattr(np, op)(a)
    if isinstance(node, Pow):
        a = _eval(node.base, t)
        k = node.exponent
        arr = np.asarray(a)
        if not float(k).is_integer():
            bad = arr < 0
            if np.any(bad):
                _fail("fractional power of negative value", t, bad)
        if k < 0:
            bad = arr == 0
            if np.any(bad):
                _fail("negative power of zero", t, bad)
        return np.power(a, k)
    a = _eval(node.left, t)
    b = _eval(node.right, t)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    bad = np.asarray(b) == 0
    if np.any(bad):
        _fail("division by zero", t, bad)
    return a / b


# --------------------------------------------------------------------------
# differentiation and simplification

def differentiate(node: Expr) -> Expr:
    """Exact first derivative with respect to ``t`` (simplified)."""
    return simplify(_d(node))


def _d(node: Expr) -> Expr:
    if isinstance(node, Const):
        return ZERO
    if isinstance(node, Var):
        return ONE
    if isinstance(node, Unary):
        u, du = node.arg, _d(node.arg)
        op = node.op
        if op == "neg":
            return Unary("neg", du)
        if op == "sin":
            outer = Unary("cos", u)
        elif op == "cos":
            outer = Unary("neg", Unary("sin", u))
        elif op == "sinh":
            outer = Unary("cosh", u)
        elif op == "cosh":
            outer = Unary("sinh", u)
        elif op == "exp":
            outer = node
        elif op == "log":
            return BinOp("/", du, u)
        elif op == "sqrt":
            return BinOp("/", du, BinOp("*", Const(2.0), node))
        else:
            raise ValueError(f"unknown function {op}")
        return BinOp("*", outer, du)
    if isinstance(node, Pow):
        k = node.exponent
        return BinOp("*", BinOp("*", Const(k), Pow(node.base, k - 1.0)), _d(node.base))
    u, v = node.left, node.right
    du, dv = _d(u), _d(v)
    if node.op in "+-":
        return BinOp(node.op, du, dv)
    if node.op == "*":
        return BinOp("+", BinOp("*", du, v), BinOp("*", u, dv))
    if isinstance(simplify(v), Const):
        return BinOp("/", du, v)
    return BinOp("/", BinOp("-", BinOp("*", du, v), BinOp("*", u, dv)), Pow(v, 2.0))


def simplify(node: Expr) -> Expr:
    """Constant folding plus removal of trivial identities (x+0, x*1, x*0, x^1)."""
    if isinstance(node, (Const, Var)):
        return node
    if isinstance(node, Unary):
        a = simplify(node.arg)
        if node.op == "neg":
            if isinstance(a, Const):
                return Const(-a.value)
            if isinstance(a, Unary) and a.op == "neg":
                return a.arg
        out = Unary(node.op, a)
        return _fold(out) if isinstance(a, Const) else out
    if isinstance(node, Pow):
        b = simplify(node.base)
        if node.exponent == 1.0:
            return b
        if node.exponent == 0.0:
            return ONE
        out = Pow(b, node.exponent)
        return _fold(out) if isinstance(b, Const) else out
    a, b = simplify(node.left), simplify(node.right)
    op = node.op
    if isinstance(a, Const) and isinstance(b, Const):
        return _fold(BinOp(op, a, b))
    if op == "+":
        if _is(a, 0.0):
            return b
        if _is(b, 0.0):
            return a
    elif op == "-":
        if _is(b, 0.0):
            return a
        if _is(a, 0.0):
            return simplify(Unary("neg", b))
    elif op == "*":
        if _is(a, 0.0) or _is(b, 0.0):
            return ZERO
        if _is(a, 1.0):
            return b
        if _is(b, 1.0):
            return a
        if _is(a, -1.0):
            return simplify(Unary("neg", b))
        if _is(b, -1.0):
            return simplify(Unary("neg", a))
    elif op == "/":
        if _is(b, 1.0):
            return a
    return BinOp(op, a, b)


def _is(node: Expr, value: float) -> bool:
    return isinstance(node, Const) and node.value == value


def _fold(node: Expr) -> Expr:
    try:
        return Const(eval_expr(node, 0.0))
    except DomainError:
        return node


def derivative_chain(node: Expr, order: int) -> list[Expr]:
    """[node, node', node'', ...] up to ``order``."""
    out = [simplify(node)]
    for _ in range(order):
        out.append(differentiate(out[-1]))
    return out


def is_constant(node: Expr) -> bool:
    if isinstance(node, Const):
        return True
    if isinstance(node, Var):
        return False
    if isinstance(node, Unary):
        return is_constant(node.arg)
    if isinstance(node, Pow):
        return is_constant(node.base)
    return is_constant(node.left) and is_constant(node.right)
