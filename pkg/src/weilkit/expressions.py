"""Smooth-map expression trees and their parser.

A smooth map is a tuple of expression trees over input variables
``t0..t{n-1}`` (with ``t``/``x`` as aliases for ``t0`` and ``y`` for
``t1``), built from rational constants, `+ - * /`, integer powers via
``^``, and the primitives sin, cos, exp, log, sqrt.  Multi-output maps
are written as comma-separated expressions, optionally parenthesized:
``(t, t^2 + t^3)``.

This module owns the tree shape, parsing, scalar evaluation (exact on
rationals for the arithmetic fragment, float otherwise), symbolic
polynomial extraction, and composition/pairing plumbing.  Lifting
through a Weil algebra lives in the lifting module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import DomainError, ParseError, ScalarModeError
from .polynomials import Polynomial, constant, variable

PRIMITIVES = ("sin", "cos", "exp", "log", "sqrt")

VAR_ALIASES: Dict[str, int] = {"t": 0, "x": 0, "y": 1}


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction


@dataclass(frozen=True)
class Var(Expr):
    index: int


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    arg: Expr


@dataclass(frozen=True)
class SmoothMap:
    """arity inputs, one expression tree per output."""

    arity: int
    outputs: Tuple[Expr, ...]

    @property
    def coarity(self) -> int:
        return len(self.outputs)

    def select(self, indices: Sequence[int]) -> "SmoothMap":
        """Post-compose with a coordinate projection."""
        return SmoothMap(self.arity, tuple(self.outputs[i] for i in indices))


def pair_maps(f: SmoothMap, g: SmoothMap) -> SmoothMap:
    if f.arity != g.arity:
        raise ValueError("paired maps must share arity")
    return SmoothMap(f.arity, f.outputs + g.outputs)


def compose_maps(outer: SmoothMap, inner: SmoothMap) -> SmoothMap:
    """outer o inner; inner's coarity must equal outer's arity."""
    if inner.coarity != outer.arity:
        raise ValueError(
            f"cannot compose: inner has {inner.coarity} outputs, outer takes {outer.arity}"
        )

    def subst(e: Expr) -> Expr:
        if isinstance(e, Const):
            return e
        if isinstance(e, Var):
            return inner.outputs[e.index]
        if isinstance(e, Add):
            return Add(subst(e.left), subst(e.right))
        if isinstance(e, Sub):
            return Sub(subst(e.left), subst(e.right))
        if isinstance(e, Mul):
            return Mul(subst(e.left), subst(e.right))
        if isinstance(e, Div):
            return Div(subst(e.left), subst(e.right))
        if isinstance(e, Neg):
            return Neg(subst(e.arg))
        if isinstance(e, Pow):
            return Pow(subst(e.base), e.exponent)
        if isinstance(e, Call):
            return Call(e.fn, subst(e.arg))
        raise TypeError(f"unknown expression node {e!r}")

    return SmoothMap(inner.arity, tuple(subst(o) for o in outer.outputs))


def max_var_index(e: Expr) -> int:
    if isinstance(e, Var):
        return e.index
    if isinstance(e, (Add, Sub, Mul, Div)):
        return max(max_var_index(e.left), max_var_index(e.right))
    if isinstance(e, Neg):
        return max_var_index(e.arg)
    if isinstance(e, Pow):
        return max_var_index(e.base)
    if isinstance(e, Call):
        return max_var_index(e.arg)
    return -1


# ---------------------------------------------------------------------------
# parsing


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise ParseError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch: str):
        if not self.take(ch):
            self.error(f"expected {ch!r}")

    def read_int(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected integer")
        return int(self.text[start : self.pos])

    def read_name(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        if self.pos == start:
            self.error("expected name")
        return self.text[start : self.pos]

    # expr := term (('+'|'-') term)*
    def expr(self) -> Expr:
        node = self.term()
        while True:
            c = self.peek()
            if c == "+":
                self.pos += 1
                node = Add(node, self.term())
            elif c == "-":
                self.pos += 1
                node = Sub(node, self.term())
            else:
                return node

    # term := factor (('*'|'/') factor)*
    def term(self) -> Expr:
        node = self.factor()
        while True:
            c = self.peek()
            if c == "*":
                self.pos += 1
                node = Mul(node, self.factor())
            elif c == "/":
                self.pos += 1
                node = Div(node, self.factor())
            else:
                return node

    # factor := '-' factor | power
    def factor(self) -> Expr:
        if self.peek() == "-":
            self.pos += 1
            return Neg(self.factor())
        return self.power()

    # power := atom ('^' '-'? INT)*
    def power(self) -> Expr:
        node = self.atom()
        while self.peek() == "^":
            self.pos += 1
            sign = -1 if self.take("-") else 1
            node = Pow(node, sign * self.read_int())
        return node

    def atom(self) -> Expr:
        c = self.peek()
        if c == "(":
            self.pos += 1
            node = self.expr()
            if self.peek() == ",":
                self.error("tuple syntax is only allowed at the top level")
            self.expect(")")
            return node
        if c.isdigit():
            return Const(Fraction(self.read_int()))
        if c.isalpha() or c == "_":
            name = self.read_name()
            if name in PRIMITIVES:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(name, arg)
            if name.startswith("t") and name[1:].isdigit():
                return Var(int(name[1:]))
            if name in VAR_ALIASES:
                return Var(VAR_ALIASES[name])
            self.error(f"unknown name {name!r}")
        self.error("expected expression")

    def expr_list(self) -> List[Expr]:
        # optional outer parens around a comma list: "(e1, e2, ...)"
        self.skip_ws()
        snapshot = self.pos
        if self.take("("):
            exprs = [self.expr()]
            if self.peek() == ",":
                while self.take(","):
                    exprs.append(self.expr())
                self.expect(")")
                self.skip_ws()
                if self.pos != len(self.text):
                    self.error("trailing input after tuple")
                return exprs
            # plain parenthesized expression; rewind and parse normally
            self.pos = snapshot
        exprs = [self.expr()]
        while self.take(","):
            exprs.append(self.expr())
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("trailing input")
        return exprs


def parse_smooth_map(text: str, arity: int | None = None) -> SmoothMap:
    if not text.strip():
        raise ParseError("empty expression", 0)
    outputs = tuple(_Parser(text).expr_list())
    used = max((max_var_index(o) for o in outputs), default=-1)
    if arity is None:
        arity = used + 1
    elif used >= arity:
        raise ParseError(f"expression uses t{used} but arity is {arity}")
    return SmoothMap(arity, outputs)


# ---------------------------------------------------------------------------
# scalar evaluation

Number = Union[Fraction, float]

_FLOAT_FNS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
}


def eval_expr_float(e: Expr, args: Sequence[float]) -> float:
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, Var):
        return float(args[e.index])
    if isinstance(e, Add):
        return eval_expr_float(e.left, args) + eval_expr_float(e.right, args)
    if isinstance(e, Sub):
        return eval_expr_float(e.left, args) - eval_expr_float(e.right, args)
    if isinstance(e, Mul):
        return eval_expr_float(e.left, args) * eval_expr_float(e.right, args)
    if isinstance(e, Div):
        den = eval_expr_float(e.right, args)
        if den == 0.0:
            raise DomainError("division by zero")
        return eval_expr_float(e.left, args) / den
    if isinstance(e, Neg):
        return -eval_expr_float(e.arg, args)
    if isinstance(e, Pow):
        base = eval_expr_float(e.base, args)
        if e.exponent < 0 and base == 0.0:
            raise DomainError("zero base with negative exponent")
        return base ** e.exponent
    if isinstance(e, Call):
        v = eval_expr_float(e.arg, args)
        if e.fn == "log" and v <= 0.0:
            raise DomainError("log of a non-positive value")
        if e.fn == "sqrt" and v < 0.0:
            raise DomainError("sqrt of a negative value")
        return _FLOAT_FNS[e.fn](v)
    raise TypeError(f"unknown expression node {e!r}")


def eval_expr_exact(e: Expr, args: Sequence[Fraction]) -> Fraction:
    """Exact evaluation of the arithmetic fragment; primitives raise."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return Fraction(args[e.index])
    if isinstance(e, Add):
        return eval_expr_exact(e.left, args) + eval_expr_exact(e.right, args)
    if isinstance(e, Sub):
        return eval_expr_exact(e.left, args) - eval_expr_exact(e.right, args)
    if isinstance(e, Mul):
        return eval_expr_exact(e.left, args) * eval_expr_exact(e.right, args)
    if isinstance(e, Div):
        den = eval_expr_exact(e.right, args)
        if den == 0:
            raise DomainError("division by zero")
        return eval_expr_exact(e.left, args) / den
    if isinstance(e, Neg):
        return -eval_expr_exact(e.arg, args)
    if isinstance(e, Pow):
        base = eval_expr_exact(e.base, args)
        if e.exponent < 0 and base == 0:
            raise DomainError("zero base with negative exponent")
        return base ** e.exponent
    if isinstance(e, Call):
        raise ScalarModeError(f"{e.fn} has no exact rational evaluation here")
    raise TypeError(f"unknown expression node {e!r}")


def eval_map_float(f: SmoothMap, args: Sequence[float]) -> Tuple[float, ...]:
    if len(args) != f.arity:
        raise ValueError("wrong number of arguments")
    return tuple(eval_expr_float(o, args) for o in f.outputs)


# ---------------------------------------------------------------------------
# polynomial extraction


def expr_polynomial(e: Expr, nvars: int) -> Optional[Polynomial]:
    """The expression as an exact Polynomial, or None when it's not
    polynomial (primitives, non-constant denominators, negative powers
    of non-constants)."""
    if isinstance(e, Const):
        return constant(nvars, e.value)
    if isinstance(e, Var):
        if e.index >= nvars:
            raise ValueError("variable index out of range")
        return variable(nvars, e.index)
    if isinstance(e, Add):
        l, r = expr_polynomial(e.left, nvars), expr_polynomial(e.right, nvars)
        return l.add(r) if l is not None and r is not None else None
    if isinstance(e, Sub):
        l, r = expr_polynomial(e.left, nvars), expr_polynomial(e.right, nvars)
        return l.sub(r) if l is not None and r is not None else None
    if isinstance(e, Mul):
        l, r = expr_polynomial(e.left, nvars), expr_polynomial(e.right, nvars)
        return l.mul(r) if l is not None and r is not None else None
    if isinstance(e, Div):
        l, r = expr_polynomial(e.left, nvars), expr_polynomial(e.right, nvars)
        if l is None or r is None or r.degree() > 0:
            return None
        c = r.constant_term()
        if c == 0:
            raise DomainError("division by zero")
        return l.scale(Fraction(1) / c)
    if isinstance(e, Neg):
        a = expr_polynomial(e.arg, nvars)
        return a.neg() if a is not None else None
    if isinstance(e, Pow):
        base = expr_polynomial(e.base, nvars)
        if base is None:
            return None
        if e.exponent >= 0:
            result = constant(nvars, 1)
            for _ in range(e.exponent):
                result = result.mul(base)
            return result
        if base.degree() > 0:
            return None
        c = base.constant_term()
        if c == 0:
            raise DomainError("zero base with negative exponent")
        return constant(nvars, Fraction(1) / c ** (-e.exponent))
    if isinstance(e, Call):
        return None
    raise TypeError(f"unknown expression node {e!r}")


def map_polynomials(f: SmoothMap) -> Optional[List[Polynomial]]:
    out: List[Polynomial] = []
    for o in f.outputs:
        p = expr_polynomial(o, f.arity)
        if p is None:
            return None
        out.append(p)
    return out


def is_polynomial_map(f: SmoothMap) -> bool:
    return map_polynomials(f) is not None


def polynomial_to_expr(p: Polynomial) -> Expr:
    """Inverse embedding, used to turn sampled polynomials into maps."""
    node: Expr | None = None
    for mono, coeff in p.sorted_terms():
        piece: Expr = Const(coeff)
        for i, e in enumerate(mono.exponents):
            if e == 0:
                continue
            v: Expr = Var(i) if e == 1 else Pow(Var(i), e)
            piece = v if (isinstance(piece, Const) and piece.value == 1) else Mul(piece, v)
        node = piece if node is None else Add(node, piece)
    return node if node is not None else Const(Fraction(0))


def format_expr(e: Expr) -> str:
    def fmt(e: Expr, parent_prec: int) -> str:
        if isinstance(e, Const):
            s = str(e.value)
            needs_parens = (e.value < 0 and parent_prec > 0) or (
                e.value.denominator != 1 and parent_prec > 1
            )
            return f"({s})" if needs_parens else s
        if isinstance(e, Var):
            return f"t{e.index}"
        if isinstance(e, Add):
            s = f"{fmt(e.left, 1)} + {fmt(e.right, 1)}"
        elif isinstance(e, Sub):
            s = f"{fmt(e.left, 1)} - {fmt(e.right, 2)}"
        elif isinstance(e, Mul):
            s = f"{fmt(e.left, 2)}*{fmt(e.right, 2)}"
            return s if parent_prec <= 2 else f"({s})"
        elif isinstance(e, Div):
            s = f"{fmt(e.left, 2)}/{fmt(e.right, 3)}"
            return s if parent_prec <= 2 else f"({s})"
        elif isinstance(e, Neg):
            s = f"-{fmt(e.arg, 3)}"
            return s if parent_prec <= 1 else f"({s})"
        elif isinstance(e, Pow):
            return f"{fmt(e.base, 4)}^{e.exponent}"
        elif isinstance(e, Call):
            return f"{e.fn}({fmt(e.arg, 0)})"
        else:
            raise TypeError(f"unknown expression node {e!r}")
        return s if parent_prec <= 1 else f"({s})"

    return fmt(e, 0)


def format_map(f: SmoothMap) -> str:
    if f.coarity == 1:
        return format_expr(f.outputs[0])
    return "(" + ", ".join(format_expr(o) for o in f.outputs) + ")"
