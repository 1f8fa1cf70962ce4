"""Coordinate expression language with exact first and second derivatives.

An expression is parsed once into a small immutable tree; named parameters
are substituted by their numeric values at parse time, so evaluation never
touches a symbol table.  ``eval2`` propagates (value, gradient, Hessian)
triples through the tree, giving machine-precision derivatives up to second
order.  Higher derivatives are obtained by building the derivative tree with
``ScalarField.differentiate`` and evaluating that.

Grammar (``^`` binds tighter than unary minus and associates to the right)::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := "-" factor | power
    power  := atom ("^" factor)?
    atom   := number | ident | ident "(" expr ")" | "(" expr ")"

Known functions: exp, log, sqrt, sin, cos, lgamma (plus digamma, trigamma
and polygammaN, which mainly appear in machine-generated derivative trees).
Exponents must be constant; a non-constant exponent is rewritten as
``exp(b*log(a))`` while parsing.

Everything here is immutable and evaluation is pure, so fields can be shared
and evaluated from any number of threads.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .special import log_gamma, polygamma


class ParseError(ValueError):
    """Malformed expression text; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class EvaluationError(ArithmeticError):
    """Evaluation left the mathematical domain or produced a non-finite value."""


# --------------------------------------------------------------------------
# Syntax tree
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Unary:
    op: str  # "neg", "exp", "log", "sqrt", "sin", "cos", "lgamma"
    arg: object


@dataclass(frozen=True)
class Binary:
    op: str  # "add", "sub", "mul", "div"
    left: object
    right: object


@dataclass(frozen=True)
class Power:
    base: object
    exponent: float  # constant by construction


@dataclass(frozen=True)
class Psi:
    """Polygamma node: value is psi_order(arg)."""

    order: int
    arg: object


_UNARY_FUNCTIONS = ("exp", "log", "sqrt", "sin", "cos", "lgamma")


@dataclass(frozen=True)
class ScalarField:
    """An expression tree together with its chart arity and coordinate names."""

    root: object
    arity: int
    coord_names: tuple[str, ...]

    def __call__(self, point: Sequence[float]) -> float:
        return eval_value(self, point)

    def differentiate(self, index: int) -> "ScalarField":
        """Exact partial derivative with respect to coordinate ``index``, as a new field."""
        if not 0 <= index < self.arity:
            raise IndexError(f"coordinate index {index} out of range for arity {self.arity}")
        return ScalarField(_derivative(self.root, index), self.arity, self.coord_names)


def constant_field(value: float, coords: Sequence[str]) -> ScalarField:
    names = tuple(coords)
    return ScalarField(Const(float(value)), len(names), names)


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[a-zA-Z_][a-zA-Z0-9_]*)"
    r"|(?P<op>[-+*/^()]))"
)

_POLYGAMMA_RE = re.compile(r"polygamma(\d+)$")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.end() == match.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad = len(text) - len(stripped)
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, coords: Sequence[str], params: Mapping[str, float]):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.coords = {name: i for i, name in enumerate(coords)}
        self.params = dict(params)

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect_op(self, op: str) -> None:
        kind, text, offset = self.peek()
        if kind != "op" or text != op:
            raise ParseError(f"expected {op!r}", offset)
        self.advance()

    def parse(self) -> object:
        node = self.expr()
        kind, text, offset = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing input {text!r}", offset)
        return node

    def expr(self) -> object:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                rhs = self.term()
                node = Binary("add" if text == "+" else "sub", node, rhs)
            else:
                return node

    def term(self) -> object:
        node = self.factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                rhs = self.factor()
                node = Binary("mul" if text == "*" else "div", node, rhs)
            else:
                return node

    def factor(self) -> object:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Unary("neg", self.factor())
        return self.power()

    def power(self) -> object:
        base = self.atom()
        kind, text, offset = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            exponent = self.factor()
            const = _constant_value(exponent)
            if const is not None:
                return _pow(base, const)
            # Non-constant exponent: a^b -> exp(b*log(a)).
            return Unary("exp", Binary("mul", exponent, Unary("log", base)))
        return base

    def atom(self) -> object:
        kind, text, offset = self.advance()
        if kind == "number":
            return Const(float(text))
        if kind == "ident":
            next_kind, next_text, _ = self.peek()
            if next_kind == "op" and next_text == "(":
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return self.apply_function(text, arg, offset)
            if text in self.coords:
                return Var(self.coords[text])
            if text in self.params:
                return Const(float(self.params[text]))
            raise ParseError(f"unknown identifier {text!r}", offset)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected token {text!r}" if text else "unexpected end of input", offset)

    def apply_function(self, name: str, arg: object, offset: int) -> object:
        if name in _UNARY_FUNCTIONS:
            return Unary(name, arg)
        if name == "digamma":
            return Psi(0, arg)
        if name == "trigamma":
            return Psi(1, arg)
        match = _POLYGAMMA_RE.match(name)
        if match:
            return Psi(int(match.group(1)), arg)
        raise ParseError(f"unknown function {name!r}", offset)


def parse_expression(
    text: str,
    coords: Sequence[str],
    params: Mapping[str, float] | None = None,
) -> ScalarField:
    """Parse ``text`` over the named coordinates, freezing parameter values into the tree."""
    names = tuple(coords)
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate coordinate names in {names}")
    parser = _Parser(text, names, params or {})
    return ScalarField(parser.parse(), len(names), names)


def _constant_value(node: object) -> float | None:
    """Value of a variable-free subtree, or None if the subtree contains a coordinate."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return None
    if isinstance(node, Unary):
        inner = _constant_value(node.arg)
        if inner is None:
            return None
        return _apply_unary_value(node.op, inner)
    if isinstance(node, Binary):
        left = _constant_value(node.left)
        right = _constant_value(node.right) if left is not None else None
        if left is None or right is None:
            return None
        return _apply_binary_value(node.op, left, right)
    if isinstance(node, Power):
        base = _constant_value(node.base)
        return None if base is None else _pow_value(base, node.exponent)
    if isinstance(node, Psi):
        inner = _constant_value(node.arg)
        return None if inner is None else _psi_value(node.order, inner)
    raise TypeError(f"unknown node type {type(node)!r}")


# --------------------------------------------------------------------------
# Symbolic derivative (used to build higher-order derivative fields)
# --------------------------------------------------------------------------

def _is_zero(node: object) -> bool:
    return isinstance(node, Const) and node.value == 0.0


def _is_one(node: object) -> bool:
    return isinstance(node, Const) and node.value == 1.0


def _add(a: object, b: object) -> object:
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    return Binary("add", a, b)


def _sub(a: object, b: object) -> object:
    if _is_zero(b):
        return a
    if _is_zero(a):
        return Unary("neg", b)
    return Binary("sub", a, b)


def _mul(a: object, b: object) -> object:
    if _is_zero(a) or _is_zero(b):
        return Const(0.0)
    if _is_one(a):
        return b
    if _is_one(b):
        return a
    return Binary("mul", a, b)


def _div(a: object, b: object) -> object:
    if _is_zero(a):
        return Const(0.0)
    if _is_one(b):
        return a
    return Binary("div", a, b)


def _pow(base: object, exponent: float) -> object:
    if exponent == 0.0:
        return Const(1.0)
    if exponent == 1.0:
        return base
    return Power(base, float(exponent))


def _derivative(node: object, index: int) -> object:
    if isinstance(node, Const):
        return Const(0.0)
    if isinstance(node, Var):
        return Const(1.0 if node.index == index else 0.0)
    if isinstance(node, Binary):
        da = _derivative(node.left, index)
        db = _derivative(node.right, index)
        if node.op == "add":
            return _add(da, db)
        if node.op == "sub":
            return _sub(da, db)
        if node.op == "mul":
            return _add(_mul(da, node.right), _mul(node.left, db))
        if node.op == "div":
            return _sub(_div(da, node.right),
                        _div(_mul(node.left, db), _mul(node.right, node.right)))
        raise TypeError(f"unknown binary op {node.op!r}")
    if isinstance(node, Power):
        du = _derivative(node.base, index)
        scale = _mul(Const(node.exponent), _pow(node.base, node.exponent - 1.0))
        return _mul(scale, du)
    if isinstance(node, Unary):
        du = _derivative(node.arg, index)
        if node.op == "neg":
            return Unary("neg", du) if not _is_zero(du) else du
        if node.op == "exp":
            return _mul(node, du)
        if node.op == "log":
            return _div(du, node.arg)
        if node.op == "sqrt":
            return _div(du, _mul(Const(2.0), node))
        if node.op == "sin":
            return _mul(Unary("cos", node.arg), du)
        if node.op == "cos":
            return Unary("neg", _mul(Unary("sin", node.arg), du)) if not _is_zero(du) else du
        if node.op == "lgamma":
            return _mul(Psi(0, node.arg), du)
        raise TypeError(f"unknown unary op {node.op!r}")
    if isinstance(node, Psi):
        du = _derivative(node.arg, index)
        return _mul(Psi(node.order + 1, node.arg), du)
    raise TypeError(f"unknown node type {type(node)!r}")


def freeze_leading_coordinates(field: ScalarField, values: Sequence[float]) -> ScalarField:
    """Pin the first ``len(values)`` coordinates to constants; remaining ones are re-indexed."""
    frozen = tuple(float(v) for v in values)
    count = len(frozen)
    if count >= field.arity:
        raise ValueError(f"cannot freeze {count} of {field.arity} coordinates")

    def walk(node: object) -> object:
        if isinstance(node, Const):
            return node
        if isinstance(node, Var):
            if node.index < count:
                return Const(frozen[node.index])
            return Var(node.index - count)
        if isinstance(node, Unary):
            return Unary(node.op, walk(node.arg))
        if isinstance(node, Binary):
            return Binary(node.op, walk(node.left), walk(node.right))
        if isinstance(node, Power):
            return Power(walk(node.base), node.exponent)
        if isinstance(node, Psi):
            return Psi(node.order, walk(node.arg))
        raise TypeError(f"unknown node type {type(node)!r}")

    return ScalarField(walk(field.root), field.arity - count, field.coord_names[count:])


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------

def _apply_unary_value(op: str, u: float) -> float:
    if op == "neg":
        return -u
    if op == "exp":
        try:
            return math.exp(u)
        except OverflowError as err:
            raise EvaluationError(f"exp overflow at argument {u}") from err
    if op == "log":
        if u <= 0.0:
            raise EvaluationError(f"log of non-positive value {u}")
        return math.log(u)
    if op == "sqrt":
        if u < 0.0:
            raise EvaluationError(f"sqrt of negative value {u}")
        return math.sqrt(u)
    if op == "sin":
        return math.sin(u)
    if op == "cos":
        return math.cos(u)
    if op == "lgamma":
        if u <= 0.0:
            raise EvaluationError(f"lgamma of non-positive value {u}")
        return log_gamma(u)
    raise TypeError(f"unknown unary op {op!r}")


def _apply_binary_value(op: str, a: float, b: float) -> float:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0.0:
            raise EvaluationError("division by zero")
        return a / b
    raise TypeError(f"unknown binary op {op!r}")


def _pow_value(u: float, c: float) -> float:
    if u < 0.0 and c != round(c):
        raise EvaluationError(f"negative base {u} with non-integer exponent {c}")
    try:
        return u**c
    except (ZeroDivisionError, OverflowError) as err:
        raise EvaluationError(f"pow domain failure: {u}^{c}") from err


def _psi_value(order: int, u: float) -> float:
    if u <= 0.0:
        raise EvaluationError(f"polygamma of non-positive value {u}")
    return polygamma(order, u)


def _value(node: object, point: np.ndarray) -> float:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return float(point[node.index])
    if isinstance(node, Unary):
        return _apply_unary_value(node.op, _value(node.arg, point))
    if isinstance(node, Binary):
        return _apply_binary_value(node.op, _value(node.left, point), _value(node.right, point))
    if isinstance(node, Power):
        return _pow_value(_value(node.base, point), node.exponent)
    if isinstance(node, Psi):
        return _psi_value(node.order, _value(node.arg, point))
    raise TypeError(f"unknown node type {type(node)!r}")


def eval_value(field: ScalarField, point: Sequence[float]) -> float:
    """Evaluate just the value of a field (no derivatives)."""
    p = np.asarray(point, dtype=float)
    if p.shape != (field.arity,):
        raise ValueError(f"point of shape {p.shape} does not match arity {field.arity}")
    result = _value(field.root, p)
    if not math.isfinite(result):
        raise EvaluationError(f"non-finite value {result} at point {p.tolist()}")
    return result


@dataclass(frozen=True)
class Dual2:
    """Value, gradient and Hessian of a field at a point.

    The Hessian is symmetric bit-for-bit: every propagation rule below only
    ever forms symmetric combinations such as ``outer(g, g)`` or
    ``outer(a, b) + outer(b, a)``.
    """

    value: float
    grad: np.ndarray
    hess: np.ndarray


def _d2_const(value: float, n: int) -> Dual2:
    return Dual2(value, np.zeros(n), np.zeros((n, n)))


def _d2_chain(u: Dual2, f0: float, f1: float, f2: float) -> Dual2:
    hess = f1 * u.hess + f2 * np.outer(u.grad, u.grad)
    return Dual2(f0, f1 * u.grad, hess)


def _d2_add(a: Dual2, b: Dual2) -> Dual2:
    return Dual2(a.value + b.value, a.grad + b.grad, a.hess + b.hess)


def _d2_sub(a: Dual2, b: Dual2) -> Dual2:
    return Dual2(a.value - b.value, a.grad - b.grad, a.hess - b.hess)


def _d2_mul(a: Dual2, b: Dual2) -> Dual2:
    cross = np.outer(a.grad, b.grad)
    hess = a.hess * b.value + b.hess * a.value + cross + cross.T
    return Dual2(a.value * b.value, a.grad * b.value + b.grad * a.value, hess)


def _d2_div(a: Dual2, b: Dual2) -> Dual2:
    if b.value == 0.0:
        raise EvaluationError("division by zero")
    value = a.value / b.value
    grad = (a.grad - value * b.grad) / b.value
    cross = np.outer(grad, b.grad)
    hess = (a.hess - value * b.hess - cross - cross.T) / b.value
    return Dual2(value, grad, hess)


def _d2_pow(u: Dual2, c: float) -> Dual2:
    f0 = _pow_value(u.value, c)
    f1 = c * _pow_value(u.value, c - 1.0) if c != 0.0 else 0.0
    f2 = c * (c - 1.0) * _pow_value(u.value, c - 2.0) if c not in (0.0, 1.0) else 0.0
    return _d2_chain(u, f0, f1, f2)


def _d2_unary(op: str, u: Dual2) -> Dual2:
    if op == "neg":
        return Dual2(-u.value, -u.grad, -u.hess)
    if op == "exp":
        f0 = _apply_unary_value("exp", u.value)
        return _d2_chain(u, f0, f0, f0)
    if op == "log":
        f0 = _apply_unary_value("log", u.value)
        inv = 1.0 / u.value
        return _d2_chain(u, f0, inv, -inv * inv)
    if op == "sqrt":
        f0 = _apply_unary_value("sqrt", u.value)
        if u.value == 0.0:
            raise EvaluationError("sqrt has unbounded derivative at zero")
        f1 = 0.5 / f0
        return _d2_chain(u, f0, f1, -0.5 * f1 / u.value)
    if op == "sin":
        s, c = math.sin(u.value), math.cos(u.value)
        return _d2_chain(u, s, c, -s)
    if op == "cos":
        s, c = math.sin(u.value), math.cos(u.value)
        return _d2_chain(u, c, -s, -c)
    if op == "lgamma":
        f0 = _apply_unary_value("lgamma", u.value)
        return _d2_chain(u, f0, polygamma(0, u.value), polygamma(1, u.value))
    raise TypeError(f"unknown unary op {op!r}")


def _d2(node: object, point: np.ndarray) -> Dual2:
    n = point.shape[0]
    if isinstance(node, Const):
        return _d2_const(node.value, n)
    if isinstance(node, Var):
        grad = np.zeros(n)
        grad[node.index] = 1.0
        return Dual2(float(point[node.index]), grad, np.zeros((n, n)))
    if isinstance(node, Unary):
        return _d2_unary(node.op, _d2(node.arg, point))
    if isinstance(node, Binary):
        a = _d2(node.left, point)
        b = _d2(node.right, point)
        if node.op == "add":
            return _d2_add(a, b)
        if node.op == "sub":
            return _d2_sub(a, b)
        if node.op == "mul":
            return _d2_mul(a, b)
        if node.op == "div":
            return _d2_div(a, b)
        raise TypeError(f"unknown binary op {node.op!r}")
    if isinstance(node, Power):
        return _d2_pow(_d2(node.base, point), node.exponent)
    if isinstance(node, Psi):
        u = _d2(node.arg, point)
        f0 = _psi_value(node.order, u.value)
        return _d2_chain(u, f0, polygamma(node.order + 1, u.value), polygamma(node.order + 2, u.value))
    raise TypeError(f"unknown node type {type(node)!r}")


def eval2(field: ScalarField, point: Sequence[float]) -> Dual2:
    """Exact value, gradient and Hessian of ``field`` at ``point``."""
    p = np.asarray(point, dtype=float)
    if p.shape != (field.arity,):
        raise ValueError(f"point of shape {p.shape} does not match arity {field.arity}")
    result = _d2(field.root, p)
    if not (math.isfinite(result.value)
            and np.all(np.isfinite(result.grad))
            and np.all(np.isfinite(result.hess))):
        raise EvaluationError(f"non-finite derivative data at point {p.tolist()}")
    return result


# --------------------------------------------------------------------------
# Finite-difference oracle
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FdCheckReport:
    """Deviation of eval2 derivatives from second-order central differences."""

    grad_residual: float
    hess_residual: float

    @property
    def residual(self) -> float:
        return max(self.grad_residual, self.hess_residual)


def fd_check(field: ScalarField, point: Sequence[float], h: float = 1e-4) -> FdCheckReport:
    """Compare eval2 against central differences of step ``h`` (O(h²) accurate).

    Deviations are relative with a unit absolute floor: ``|ad - fd| / (1 + |ad|)``
    per entry, maximised over entries.  Raises :class:`EvaluationError` if the
    difference stencil falls outside the field's domain.
    """
    p = np.asarray(point, dtype=float)
    exact = eval2(field, p)
    n = field.arity

    def f(q: np.ndarray) -> float:
        try:
            return eval_value(field, q)
        except EvaluationError as err:
            raise EvaluationError(
                f"finite-difference stencil left the domain near {p.tolist()}: {err}"
            ) from err

    center = f(p)
    grad_dev = 0.0
    hess_dev = 0.0
    shifted = {}
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        shifted[i] = (f(p + e), f(p - e))
    for i in range(n):
        plus, minus = shifted[i]
        fd_grad = (plus - minus) / (2.0 * h)
        grad_dev = max(grad_dev, abs(fd_grad - exact.grad[i]) / (1.0 + abs(exact.grad[i])))
        fd_diag = (plus - 2.0 * center + minus) / (h * h)
        hess_dev = max(hess_dev, abs(fd_diag - exact.hess[i, i]) / (1.0 + abs(exact.hess[i, i])))
    for i in range(n):
        for j in range(i + 1, n):
            ei = np.zeros(n)
            ej = np.zeros(n)
            ei[i] = h
            ej[j] = h
            fd_cross = (f(p + ei + ej) - f(p + ei - ej) - f(p - ei + ej) + f(p - ei - ej)) / (4.0 * h * h)
            hess_dev = max(hess_dev, abs(fd_cross - exact.hess[i, j]) / (1.0 + abs(exact.hess[i, j])))
    return FdCheckReport(grad_residual=grad_dev, hess_residual=hess_dev)


# --------------------------------------------------------------------------
# Printing
# --------------------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _precedence(node: object) -> int:
    if isinstance(node, Const):
        return _PREC_NEG if node.value < 0.0 else _PREC_ATOM
    if isinstance(node, Var):
        return _PREC_ATOM
    if isinstance(node, (Psi,)):
        return _PREC_ATOM
    if isinstance(node, Unary):
        return _PREC_NEG if node.op == "neg" else _PREC_ATOM
    if isinstance(node, Power):
        return _PREC_POW
    if isinstance(node, Binary):
        return _PREC_ADD if node.op in ("add", "sub") else _PREC_MUL
    raise TypeError(f"unknown node type {type(node)!r}")


def _render(node: object, names: tuple[str, ...]) -> str:
    if isinstance(node, Const):
        return repr(node.value)
    if isinstance(node, Var):
        return names[node.index]
    if isinstance(node, Unary):
        if node.op == "neg":
            inner = _render(node.arg, names)
            if _precedence(node.arg) < _PREC_NEG:
                inner = f"({inner})"
            return f"-{inner}"
        return f"{node.op}({_render(node.arg, names)})"
    if isinstance(node, Psi):
        name = {0: "digamma", 1: "trigamma"}.get(node.order, f"polygamma{node.order}")
        return f"{name}({_render(node.arg, names)})"
    if isinstance(node, Power):
        base = _render(node.base, names)
        if _precedence(node.base) < _PREC_ATOM:
            base = f"({base})"
        return f"{base}^{repr(node.exponent)}"
    if isinstance(node, Binary):
        symbol = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[node.op]
        prec = _precedence(node)
        left = _render(node.left, names)
        if _precedence(node.left) < prec:
            left = f"({left})"
        right = _render(node.right, names)
        # A same-precedence right child is parenthesized even for + and *:
        # float arithmetic is not associative, and the round-trip contract
        # promises bitwise-identical evaluation.
        if _precedence(node.right) <= prec:
            right = f"({right})"
        return f"{left}{symbol}{right}"
    raise TypeError(f"unknown node type {type(node)!r}")


def format_expression(field: ScalarField) -> str:
    """Render a field as text that reparses to an evaluation-identical tree."""
    return _render(field.root, field.coord_names)
