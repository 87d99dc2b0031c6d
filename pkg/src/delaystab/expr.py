"""Arithmetic expressions in the single time variable ``t``.

Coefficient functions of the equation (``a_k``, ``b_k``, ``sigma``, initial
data) are given as text in a small expression language:

* decimal literals, the variable ``t``
* binary ``+ - * / ^`` and unary ``-``
* calls ``exp sin cos cosh sinh abs sqrt``

``+ - * /`` are left-associative with the usual precedence.  ``^`` is
right-associative and binds tighter than unary minus, so ``-t^2`` means
``-(t^2)``.  Parsed expressions are immutable and safe to evaluate from any
number of threads.

Evaluation follows IEEE semantics internally (numpy); a non-finite *result*
(division by zero, overflow, negative-base fractional power, ``sqrt`` of a
negative) raises :class:`EvalDomainError` instead of returning ``nan``/``inf``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import EvalDomainError, ParseError

__all__ = ["CoeffExpr", "parse"]


_FUNCTIONS = {
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "cosh": np.cosh,
    "sinh": np.sinh,
    "abs": np.abs,
    "sqrt": np.sqrt,
}


@dataclass(frozen=True, slots=True)
class _Num:
    value: float


@dataclass(frozen=True, slots=True)
class _Var:
    pass


@dataclass(frozen=True, slots=True)
class _Neg:
    arg: object


@dataclass(frozen=True, slots=True)
class _BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class _Call:
    name: str
    arg: object


def _contains_var(node) -> bool:
    if isinstance(node, _Var):
        return True
    if isinstance(node, _Neg):
        return _contains_var(node.arg)
    if isinstance(node, _BinOp):
        return _contains_var(node.left) or _contains_var(node.right)
    if isinstance(node, _Call):
        return _contains_var(node.arg)
    return False


def _eval_node(node, t):
    if isinstance(node, _Num):
        return node.value
    if isinstance(node, _Var):
        return t
    if isinstance(node, _Neg):
        return -_eval_node(node.arg, t)
    if isinstance(node, _Call):
        return _FUNCTIONS[node.name](_eval_node(node.arg, t))
    left = _eval_node(node.left, t)
    right = _eval_node(node.right, t)
    op = node.op
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    if op == "/":
        return np.divide(left, right)
    return np.power(left, right)


def _format_number(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _format_node(node) -> str:
    if isinstance(node, _Num):
        return _format_number(node.value)
    if isinstance(node, _Var):
        return "t"
    if isinstance(node, _Neg):
        return f"(-{_format_node(node.arg)})"
    if isinstance(node, _Call):
        return f"{node.name}({_format_node(node.arg)})"
    return f"({_format_node(node.left)}{node.op}{_format_node(node.right)})"


class CoeffExpr:
    """A parsed coefficient function of ``t``.

    Instances are produced by :func:`parse` and are immutable; ``eval`` /
    ``eval_many`` are pure and bitwise-reproducible.
    """

    __slots__ = ("_root", "_has_var", "_const")

    def __init__(self, root):
        self._root = root
        self._has_var = _contains_var(root)
        self._const = None

    @property
    def is_constant(self) -> bool:
        """True when the expression does not reference ``t``."""
        return not self._has_var

    def eval(self, t: float) -> float:
        """Evaluate at a single time; raises :class:`EvalDomainError` if the
        result is not a finite real."""
        with np.errstate(all="ignore"):
            out = float(_eval_node(self._root, np.float64(t)))
        if not np.isfinite(out):
            raise EvalDomainError(f"{self.format()} is not finite at t={t!r}")
        return out

    def eval_many(self, t: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`eval` over an arbitrary-shape float array."""
        t = np.asarray(t, dtype=np.float64)
        if not self._has_var:
            if self._const is None:
                self._const = self.eval(0.0)
            return np.full(t.shape, self._const)
        with np.errstate(all="ignore"):
            out = np.asarray(_eval_node(self._root, t), dtype=np.float64)
        out = np.broadcast_to(out, t.shape) if out.shape != t.shape else out
        if not np.all(np.isfinite(out)):
            bad = np.asarray(t)[~np.isfinite(out)].ravel()
            raise EvalDomainError(
                f"{self.format()} is not finite at t={bad[0]!r}"
            )
        return out

    __call__ = eval

    def format(self) -> str:
        """Canonical fully-parenthesized text; reparsing it reproduces the
        same values bitwise at every ``t``."""
        return _format_node(self._root)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"CoeffExpr({self.format()!r})"

    def __eq__(self, other):
        return isinstance(other, CoeffExpr) and self._root == other._root

    def __hash__(self):
        return hash(self.format())


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            # only whitespace may remain unmatched
            rest = text[pos:]
            if rest.strip():
                raise ParseError(
                    f"unexpected character {rest.strip()[0]!r}",
                    pos + len(rest) - len(rest.lstrip()),
                )
            break
        kind = m.lastgroup
        value = m.group(kind)
        tokens.append((kind, value, m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, value, offset = self.peek()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", offset)
        self.advance()

    def parse(self):
        node = self.expr()
        kind, value, offset = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", offset)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                node = _fold_binop(value, node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "*/":
                self.advance()
                node = _fold_binop(value, node, self.unary())
            else:
                return node

    def unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            arg = self.unary()
            if isinstance(arg, _Num):
                return _Num(-arg.value)
            return _Neg(arg)
        return self.power()

    def power(self):
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            # right-associative; exponent may carry its own sign
            return _BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, value, offset = self.advance()
        if kind == "num":
            return _Num(float(value))
        if kind == "ident":
            if value == "t":
                return _Var()
            if value in _FUNCTIONS:
                nkind, nvalue, noffset = self.peek()
                if nkind != "op" or nvalue != "(":
                    raise ParseError(
                        f"{value!r} expects one parenthesized argument", noffset
                    )
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return _Call(value, arg)
            raise ParseError(f"unknown identifier {value!r}", offset)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError("expected a number, 't', a call or '('", offset)


def _fold_binop(op, left, right):
    # fold only exact integer arithmetic so eval stays bit-stable
    if (
        op in "+-*"
        and isinstance(left, _Num)
        and isinstance(right, _Num)
        and left.value == int(left.value)
        and right.value == int(right.value)
    ):
        a, b = int(left.value), int(right.value)
        r = a + b if op == "+" else a - b if op == "-" else a * b
        if abs(r) <= 2**53:
            return _Num(float(r))
    return _BinOp(op, left, right)


def parse(text: str) -> CoeffExpr:
    """Parse expression text into a :class:`CoeffExpr`.

    Raises :class:`ParseError` (with byte offset) on malformed input,
    unknown identifiers, or misused function calls.
    """
    if not text or not text.strip():
        raise ParseError("empty expression", 0)
    return CoeffExpr(_Parser(text).parse())
