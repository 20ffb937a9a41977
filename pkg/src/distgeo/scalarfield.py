"""Univariate smooth functions of the warp parameter ``t``.

Expressions are immutable trees with exact rational constants.  They can be
parsed from text, rendered back, differentiated symbolically and evaluated as
truncated Taylor jets at a batch of sample points.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Mapping, Union

import numpy as np

from .jets import JetArray

Number = Union[int, float, Fraction]

JET_ORDER = 3


class ExprSyntaxError(ValueError):
    """Malformed expression text; ``offset`` is the byte offset of the problem."""

    def __init__(self, message, text, offset):
        super().__init__(f"{message} at byte {offset} in {text!r}")
        self.text = text
        self.offset = offset


class UnknownIdentifier(ExprSyntaxError):
    pass


class DomainError(ArithmeticError):
    """A subexpression is undefined at sample point ``t``."""

    def __init__(self, t, subexpression, reason="undefined"):
        super().__init__(f"{reason}: {subexpression} at t={t!r}")
        self.t = t
        self.subexpression = subexpression
        self.reason = reason


def _as_fraction(x: Number) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite constant {x}")
        # shortest repr keeps the float bit-exact on the way back
        return Fraction(repr(x))
    return Fraction(x)


class Expr:
    """Base of the expression tree.  Python operators build new trees."""

    __slots__ = ()

    def __add__(self, other):
        return Add(self, lift(other))

    def __radd__(self, other):
        return Add(lift(other), self)

    def __sub__(self, other):
        return Sub(self, lift(other))

    def __rsub__(self, other):
        return Sub(lift(other), self)

    def __mul__(self, other):
        return Mul(self, lift(other))

    def __rmul__(self, other):
        return Mul(lift(other), self)

    def __truediv__(self, other):
        return Div(self, lift(other))

    def __rtruediv__(self, other):
        return Div(lift(other), self)

    def __pow__(self, exponent):
        return Pow(self, _as_fraction(exponent))

    def __neg__(self):
        return Neg(self)

    def __str__(self):
        return render(self)


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", _as_fraction(self.value))


@dataclass(frozen=True, eq=True)
class Var(Expr):
    pass


@dataclass(frozen=True, eq=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    base: Expr
    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "exponent", _as_fraction(self.exponent))


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    arg: Expr


FUNCS = ("exp", "sin", "cos", "sqrt")


@dataclass(frozen=True, eq=True)
class Func(Expr):
    name: str
    arg: Expr

    def __post_init__(self):
        if self.name not in FUNCS:
            raise ValueError(f"unknown function {self.name!r}")


ScalarExpr = Expr
T = Var()
ZERO = Const(0)
ONE = Const(1)


def lift(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, str):
        return parse_expr(x)
    return Const(x)


def exp(x):
    return Func("exp", lift(x))


def sin(x):
    return Func("sin", lift(x))


def cos(x):
    return Func("cos", lift(x))


def sqrt(x):
    return Func("sqrt", lift(x))


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^()]))"
)


@dataclass
class _Token:
    kind: str
    text: str
    offset: int


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", text, _byte_offset(text, pos))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(_Token(kind, m.group(kind), start))
        pos = m.end()
    tokens.append(_Token("end", "", n))
    return tokens


def _byte_offset(text, index):
    return len(text[:index].encode("utf-8"))


class _Parser:
    def __init__(self, text, params):
        self.text = text
        self.params = params
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok, cls=ExprSyntaxError):
        return cls(message, self.text, _byte_offset(self.text, tok.offset))

    def expect(self, op):
        tok = self.take()
        if tok.kind != "op" or tok.text != op:
            found = tok.text or "end of input"
            raise self.error(f"expected {op!r}, found {found!r}", tok)
        return tok

    def is_op(self, *ops):
        tok = self.peek()
        return tok.kind == "op" and tok.text in ops

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise self.error(f"unexpected {tok.text!r}", tok)
        return node

    def expr(self):
        node = self.term()
        while self.is_op("+", "-"):
            op = self.take().text
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.is_op("*", "/"):
            tok = self.take()
            nxt = self.peek()
            if nxt.kind == "end" or (nxt.kind == "op" and nxt.text in ")*/^+"):
                what = "denominator" if tok.text == "/" else "operand"
                raise self.error(f"empty {what}", nxt)
            rhs = self.factor()
            node = Mul(node, rhs) if tok.text == "*" else Div(node, rhs)
        return node

    def factor(self):
        node = self.base()
        if self.is_op("^"):
            self.take()
            node = Pow(node, self.exponent())
        return node

    def signed_number(self):
        neg = False
        if self.is_op("-"):
            self.take()
            neg = True
        tok = self.take()
        if tok.kind != "num":
            raise self.error("expected a number in exponent", tok)
        value = Fraction(tok.text)
        return -value if neg else value, tok

    def exponent(self):
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            return Fraction(tok.text)
        if self.is_op("("):
            self.take()
            num, _ = self.signed_number()
            if self.is_op("/"):
                slash = self.take()
                nxt = self.peek()
                if nxt.kind == "op" and nxt.text == ")":
                    raise self.error("empty denominator", nxt)
                den, dtok = self.signed_number()
                if den == 0:
                    raise self.error("zero denominator in exponent", dtok)
                num = num / den
            self.expect(")")
            return num
        raise self.error("expected exponent", tok)

    def base(self):
        tok = self.take()
        if tok.kind == "num":
            return Const(Fraction(tok.text))
        if tok.kind == "op":
            if tok.text == "(":
                node = self.expr()
                self.expect(")")
                return node
            if tok.text == "-":
                return Neg(self.base())
            raise self.error(f"unexpected {tok.text!r}", tok)
        if tok.kind == "name":
            if tok.text == "t":
                return T
            if tok.text in FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Func(tok.text, arg)
            if tok.text in self.params:
                return lift(self.params[tok.text])
            raise self.error(f"unknown identifier {tok.text!r}", tok, UnknownIdentifier)
        raise self.error("unexpected end of input", tok)


def parse_expr(text: str, params: Mapping[str, Number] | None = None) -> Expr:
    """Parse ``text``; names in ``params`` are substituted as constants."""
    return _Parser(text, dict(params or {})).parse()


# -- rendering -----------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_POW, _PREC_BASE = 1, 2, 3, 4


def _render_fraction(q: Fraction) -> str:
    den = q.denominator
    while den % 2 == 0:
        den //= 2
    while den % 5 == 0:
        den //= 5
    if den != 1:
        body = f"({abs(q.numerator)}/{q.denominator})"
    elif q.denominator == 1:
        body = str(abs(q.numerator))
    else:
        with localcontext() as ctx:
            ctx.prec = 200
            body = format(Decimal(abs(q.numerator)) / Decimal(q.denominator), "f")
    return body


def _render_exponent(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator) if q >= 0 else f"({q.numerator})"
    return f"({q.numerator}/{q.denominator})"


def _prec(e):
    if isinstance(e, (Add, Sub)):
        return _PREC_ADD
    if isinstance(e, (Mul, Div)):
        return _PREC_MUL
    if isinstance(e, Pow):
        return _PREC_POW
    if isinstance(e, Const) and e.value < 0:
        return _PREC_BASE
    return _PREC_BASE


def _wrap(e, min_prec):
    s = render(e)
    return s if _prec(e) >= min_prec else f"({s})"


def render(e: Expr) -> str:
    """Text form that parses back to an identical tree (for parser outputs)."""
    if isinstance(e, Const):
        body = _render_fraction(e.value)
        return f"-{body}" if e.value < 0 else body
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Add):
        return f"{_wrap(e.left, _PREC_ADD)}+{_wrap(e.right, _PREC_MUL)}"
    if isinstance(e, Sub):
        return f"{_wrap(e.left, _PREC_ADD)}-{_wrap(e.right, _PREC_MUL)}"
    if isinstance(e, Mul):
        return f"{_wrap(e.left, _PREC_MUL)}*{_wrap(e.right, _PREC_POW)}"
    if isinstance(e, Div):
        return f"{_wrap(e.left, _PREC_MUL)}/{_wrap(e.right, _PREC_POW)}"
    if isinstance(e, Pow):
        return f"{_wrap_base(e.base)}^{_render_exponent(e.exponent)}"
    if isinstance(e, Neg):
        return f"-{_wrap_base(e.arg)}"
    if isinstance(e, Func):
        return f"{e.name}({render(e.arg)})"
    raise TypeError(f"not an expression: {e!r}")


def _wrap_base(e):
    # a negative constant renders with a leading minus, which is a base only
    # when it is not followed by '^'
    if isinstance(e, (Var, Func)) or (isinstance(e, Const) and e.value >= 0):
        return render(e)
    if isinstance(e, Neg):
        return render(e)
    return f"({render(e)})"


# -- smart constructors used by derive ------------------------------------------


def _is_const(e, value=None):
    return isinstance(e, Const) and (value is None or e.value == value)


def s_add(a, b):
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    if isinstance(b, Neg):
        return s_sub(a, b.arg)
    return Add(a, b)


def s_sub(a, b):
    if _is_const(b, 0):
        return a
    if _is_const(a, 0):
        return s_neg(b)
    if _is_const(a) and _is_const(b):
        return Const(a.value - b.value)
    if isinstance(b, Neg):
        return s_add(a, b.arg)
    return Sub(a, b)


def s_neg(a):
    if _is_const(a):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def s_mul(a, b):
    if _is_const(a, 0) or _is_const(b, 0):
        return ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    if _is_const(b):
        a, b = b, a
    if _is_const(a, -1):
        return s_neg(b)
    if _is_const(a) and isinstance(b, Mul) and _is_const(b.left):
        return s_mul(Const(a.value * b.left.value), b.right)
    if isinstance(a, Neg):
        return s_neg(s_mul(a.arg, b))
    if isinstance(b, Neg):
        return s_neg(s_mul(a, b.arg))
    return Mul(a, b)


def s_div(a, b):
    if _is_const(b, 0):
        return Div(a, b)
    if _is_const(a, 0):
        return ZERO
    if _is_const(b, 1):
        return a
    if _is_const(a) and _is_const(b):
        return Const(a.value / b.value)
    if _is_const(b):
        return s_mul(Const(1 / b.value), a)
    return Div(a, b)


def s_pow(a, r):
    r = _as_fraction(r)
    if r == 0:
        return ONE
    if r == 1:
        return a
    if _is_const(a) and r.denominator == 1 and (a.value != 0 or r > 0):
        return Const(a.value ** r.numerator)
    return Pow(a, r)


def derive(e: Expr) -> Expr:
    """Symbolic d/dt."""
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Add):
        return s_add(derive(e.left), derive(e.right))
    if isinstance(e, Sub):
        return s_sub(derive(e.left), derive(e.right))
    if isinstance(e, Neg):
        return s_neg(derive(e.arg))
    if isinstance(e, Mul):
        u, v = e.left, e.right
        return s_add(s_mul(derive(u), v), s_mul(u, derive(v)))
    if isinstance(e, Div):
        u, v = e.left, e.right
        du, dv = derive(u), derive(v)
        if _is_const(dv, 0):
            return s_div(du, v)
        return s_div(s_sub(s_mul(du, v), s_mul(u, dv)), s_pow(v, 2))
    if isinstance(e, Pow):
        u, r = e.base, e.exponent
        return s_mul(s_mul(Const(r), derive(u)), s_pow(u, r - 1))
    if isinstance(e, Func):
        u = e.arg
        du = derive(u)
        if e.name == "exp":
            return s_mul(du, e)
        if e.name == "sin":
            return s_mul(du, Func("cos", u))
        if e.name == "cos":
            return s_neg(s_mul(du, Func("sin", u)))
        if e.name == "sqrt":
            return s_div(du, s_mul(Const(2), e))
    raise TypeError(f"not an expression: {e!r}")


def derivative(e: Expr, k: int = 1) -> Expr:
    for _ in range(k):
        e = derive(e)
    return e


# -- evaluation -------------------------------------------------------------------


def _first_bad(points, mask):
    mask = np.asarray(mask)
    idx = int(np.argmax(mask.reshape(-1)))
    return float(np.asarray(points).reshape(-1)[idx])


def evaluate(e: Expr, points, order: int = JET_ORDER) -> JetArray:
    """Jets of ``e`` at every point; result has tensor shape ``()``."""
    pts = np.asarray(points, dtype=float).reshape(-1)
    return _eval(e, pts, order)


def _eval(e, pts, order):
    if isinstance(e, Const):
        return JetArray.constant(float(e.value), pts.size, order)
    if isinstance(e, Var):
        return JetArray.variable(pts, order)
    if isinstance(e, Add):
        return _eval(e.left, pts, order) + _eval(e.right, pts, order)
    if isinstance(e, Sub):
        return _eval(e.left, pts, order) - _eval(e.right, pts, order)
    if isinstance(e, Neg):
        return -_eval(e.arg, pts, order)
    if isinstance(e, Mul):
        return _eval(e.left, pts, order) * _eval(e.right, pts, order)
    if isinstance(e, Div):
        den = _eval(e.right, pts, order)
        bad = den.values == 0
        if np.any(bad):
            raise DomainError(_first_bad(pts, bad), render(e), "division by zero")
        return _eval(e.left, pts, order) / den
    if isinstance(e, Pow):
        base = _eval(e.base, pts, order)
        r = e.exponent
        v = base.values
        if r < 0 or r.denominator != 1:
            bad = v == 0
            if r.denominator % 2 == 0:
                bad = v <= 0
            if np.any(bad):
                raise DomainError(_first_bad(pts, bad), render(e), "power outside its domain")
        return base.power(r)
    if isinstance(e, Func):
        arg = _eval(e.arg, pts, order)
        if e.name == "exp":
            out = arg.exp()
            if not np.all(np.isfinite(out.c)):
                bad = ~np.isfinite(out.values)
                raise DomainError(_first_bad(pts, bad), render(e), "overflow")
            return out
        if e.name == "sin":
            return arg.sin()
        if e.name == "cos":
            return arg.cos()
        if e.name == "sqrt":
            bad = arg.values <= 0
            if np.any(bad):
                raise DomainError(_first_bad(pts, bad), render(e), "square root outside its domain")
            return arg.sqrt()
    raise TypeError(f"not an expression: {e!r}")


@dataclass(frozen=True)
class Jet:
    """Value and first three derivatives at a point."""

    value: float
    d1: float = 0.0
    d2: float = 0.0
    d3: float = 0.0

    def _arr(self):
        return JetArray.from_derivatives(np.array([[self.value, self.d1, self.d2, self.d3]]))

    @staticmethod
    def _from(arr: JetArray):
        d = arr.derivatives()[0]
        return Jet(*(float(x) for x in d))

    @staticmethod
    def _lift(x):
        return x if isinstance(x, Jet) else Jet(float(x))

    def __add__(self, other):
        return Jet._from(self._arr() + Jet._lift(other)._arr())

    __radd__ = __add__

    def __sub__(self, other):
        return Jet._from(self._arr() - Jet._lift(other)._arr())

    def __rsub__(self, other):
        return Jet._lift(other) - self

    def __mul__(self, other):
        return Jet._from(self._arr() * Jet._lift(other)._arr())

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Jet._from(self._arr() / Jet._lift(other)._arr())

    def __rtruediv__(self, other):
        return Jet._lift(other) / self

    def __neg__(self):
        return Jet(-self.value, -self.d1, -self.d2, -self.d3)

    def as_tuple(self):
        return (self.value, self.d1, self.d2, self.d3)


def eval_jet(e: Expr | str, t: float) -> Jet:
    e = lift(e)
    arr = evaluate(e, [t], JET_ORDER)
    return Jet._from(arr)


def eval_values(e: Expr | str, points) -> np.ndarray:
    return evaluate(lift(e), points, 0).values


@dataclass(frozen=True)
class SamplePlan:
    points: tuple = field(default_factory=lambda: tuple(np.round(0.10 + 0.125 * np.arange(17), 12)))
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise ValueError("sample plan needs at least one point")
        if len(set(pts)) != len(pts):
            raise ValueError("sample points must be pairwise distinct")

    @property
    def array(self):
        return np.array(self.points)

    def shifted(self, offset: float) -> "SamplePlan":
        return SamplePlan(tuple(p + offset for p in self.points), self.abs_tol, self.rel_tol)

    def with_tolerance(self, abs_tol=None, rel_tol=None) -> "SamplePlan":
        return SamplePlan(
            self.points,
            self.abs_tol if abs_tol is None else abs_tol,
            self.rel_tol if rel_tol is None else rel_tol,
        )

    def check_nonvanishing(self, exprs, label="expression"):
        """Raise DomainError if any expression is within abs_tol of zero at a point."""
        for e in exprs:
            vals = eval_values(e, self.points)
            bad = np.abs(vals) <= self.abs_tol
            if np.any(bad):
                raise DomainError(_first_bad(self.points, bad), render(lift(e)), f"{label} vanishes")


DEFAULT_PLAN = SamplePlan()


def approx_zero(e: Expr | str, plan: SamplePlan = DEFAULT_PLAN, scale: float = 1.0) -> bool:
    vals = eval_values(e, plan.points)
    return bool(np.all(np.abs(vals) <= plan.abs_tol + plan.rel_tol * scale))
