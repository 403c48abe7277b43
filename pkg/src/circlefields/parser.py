"""Parse field-coefficient expressions into trig polynomials.

Grammar (EBNF)::

    expr    ::= term (("+" | "-") term)*
    term    ::= unary ("*" unary)*
    unary   ::= ("+" | "-") unary | power
    power   ::= atom ("^" INTEGER)?
    atom    ::= NUMBER | "pi" | "t" | trig | "(" expr ")"
    trig    ::= ("sin" | "cos") "(" expr ")"

Side conditions: a sin/cos argument must lower to k*t with a nonzero
integer k, |k| <= 64; the symbol t may not occur outside a trig argument
(such an expression is not 2*pi-periodic).  Every accepted expression
lowers to a :class:`~circlefields.trig.TrigPoly` through product-to-sum
expansion, so downstream algebra stays exact.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .trig import PeriodicFunction, TrigPoly, cos_term, lincomb, multiply, sin_term, constant

MAX_HARMONIC = 64


class FieldSyntaxError(ValueError):
    """Malformed expression; ``position`` is the byte offset of the fault."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class NonPeriodicError(ValueError):
    """t used outside sin/cos or with a non-integer multiplier."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


_TOKEN = re.compile(
    r"(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]+)"
    r"|(?P<op>[-+*^()])"
)


@dataclass
class _Token:
    kind: str  # num | name | op | end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if m is None:
            raise FieldSyntaxError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        tokens.append(_Token(kind, m.group(), i))
        i = m.end()
    tokens.append(_Token("end", "", n))
    return tokens


# Lowered values: a plain number, a multiple of t (legal only inside a trig
# argument), or a trig polynomial.
@dataclass
class _Val:
    kind: str  # const | tmul | poly
    const: float = 0.0
    tcoef: float = 0.0
    poly: TrigPoly | None = None
    pos: int = 0


def _as_poly(v: _Val) -> TrigPoly:
    if v.kind == "poly":
        return v.poly
    if v.kind == "const":
        return constant(v.const)
    raise NonPeriodicError("t may only appear inside sin(...) or cos(...)", v.pos)


def _add(a: _Val, b: _Val, sign: float, pos: int) -> _Val:
    if a.kind == "const" and b.kind == "const":
        return _Val("const", const=a.const + sign * b.const, pos=a.pos)
    if a.kind == "tmul" and b.kind == "tmul":
        return _Val("tmul", tcoef=a.tcoef + sign * b.tcoef, pos=a.pos)
    if "tmul" in (a.kind, b.kind):
        bad = a if a.kind == "tmul" else b
        raise NonPeriodicError("t may only appear inside sin(...) or cos(...)", bad.pos)
    return _Val("poly", poly=lincomb(1.0, _as_poly(a), sign, _as_poly(b)), pos=pos)


def _mul(a: _Val, b: _Val, pos: int) -> _Val:
    if a.kind == "const" and b.kind == "const":
        return _Val("const", const=a.const * b.const, pos=a.pos)
    if a.kind == "tmul" and b.kind == "tmul":
        raise NonPeriodicError("t*t is not 2*pi-periodic", a.pos)
    if a.kind == "tmul" or b.kind == "tmul":
        tv, other = (a, b) if a.kind == "tmul" else (b, a)
        if other.kind == "const":
            return _Val("tmul", tcoef=tv.tcoef * other.const, pos=tv.pos)
        raise NonPeriodicError("t may only be scaled by a constant inside trig", tv.pos)
    return _Val("poly", poly=multiply(_as_poly(a), _as_poly(b)), pos=pos)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> _Token:
        tok = self.next()
        if tok.kind != "op" or tok.text != op:
            raise FieldSyntaxError(f"expected {op!r}", tok.pos)
        return tok

    def parse(self) -> _Val:
        v = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise FieldSyntaxError(f"unexpected {tok.text!r}", tok.pos)
        return v

    def expr(self) -> _Val:
        v = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next()
            rhs = self.term()
            v = _add(v, rhs, 1.0 if op.text == "+" else -1.0, op.pos)
        return v

    def term(self) -> _Val:
        v = self.unary()
        while self.peek().kind == "op" and self.peek().text == "*":
            op = self.next()
            rhs = self.unary()
            v = _mul(v, rhs, op.pos)
        return v

    def unary(self) -> _Val:
        tok = self.peek()
        if tok.kind == "op" and tok.text in "+-":
            self.next()
            v = self.unary()
            if tok.text == "-":
                v = _mul(_Val("const", const=-1.0, pos=tok.pos), v, tok.pos)
            return v
        return self.power()

    def power(self) -> _Val:
        v = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            op = self.next()
            etok = self.next()
            if etok.kind != "num" or not re.fullmatch(r"\d+", etok.text):
                raise FieldSyntaxError("exponent must be a nonnegative integer literal", etok.pos)
            e = int(etok.text)
            if v.kind == "const":
                return _Val("const", const=v.const**e, pos=v.pos)
            if v.kind == "tmul":
                if e == 1:
                    return v
                raise NonPeriodicError("powers of t are not 2*pi-periodic", v.pos)
            p = v.poly
            if p.degree * e > MAX_HARMONIC:
                raise FieldSyntaxError(
                    f"power would exceed the harmonic cap {MAX_HARMONIC}", op.pos
                )
            out = constant(1.0)
            for _ in range(e):
                out = multiply(out, p)
            return _Val("poly", poly=out, pos=v.pos)
        return v

    def atom(self) -> _Val:
        tok = self.next()
        if tok.kind == "num":
            return _Val("const", const=float(tok.text), pos=tok.pos)
        if tok.kind == "name":
            if tok.text == "pi":
                return _Val("const", const=math.pi, pos=tok.pos)
            if tok.text == "t":
                return _Val("tmul", tcoef=1.0, pos=tok.pos)
            if tok.text in ("sin", "cos"):
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return self.lower_trig(tok.text, arg, tok.pos)
            raise FieldSyntaxError(f"unknown name {tok.text!r}", tok.pos)
        if tok.kind == "op" and tok.text == "(":
            v = self.expr()
            self.expect_op(")")
            return v
        raise FieldSyntaxError(f"unexpected {tok.text or 'end of input'!r}", tok.pos)

    def lower_trig(self, name: str, arg: _Val, pos: int) -> _Val:
        if arg.kind != "tmul":
            raise FieldSyntaxError(f"{name} argument must have the form k*t", pos)
        k = arg.tcoef
        k_int = round(k)
        if abs(k - k_int) > 1e-9:
            raise NonPeriodicError(
                f"{name}({k}*t) is not 2*pi-periodic: multiplier must be an integer", pos
            )
        k_int = int(k_int)
        if k_int == 0:
            raise FieldSyntaxError(f"{name} argument must be a nonzero multiple of t", pos)
        if abs(k_int) > MAX_HARMONIC:
            raise FieldSyntaxError(f"harmonic {abs(k_int)} exceeds the cap {MAX_HARMONIC}", pos)
        if name == "cos":
            poly = cos_term(abs(k_int))
        else:
            poly = sin_term(abs(k_int), 1.0 if k_int > 0 else -1.0)
        return _Val("poly", poly=poly, pos=pos)


def parse(text: str) -> TrigPoly:
    """Parse ``text`` into a trig polynomial, or raise a structured error."""
    v = _Parser(text).parse()
    return _as_poly(v)


def _fmt_num(c: float) -> str:
    c = float(c)
    if c == int(c) and abs(c) < 1e15:
        return str(int(c))
    return repr(c)


def format(f: PeriodicFunction) -> str:
    """Render a TrigPoly so that ``parse(format(f))`` recovers f exactly."""
    if not isinstance(f, TrigPoly):
        raise TypeError("only plain trig polynomials format as expressions; use JSON for piecewise data")
    terms: list[tuple[float, str]] = []
    if f.a0 != 0.0:
        terms.append((f.a0, ""))
    for m in range(1, f.degree + 1):
        arg = "t" if m == 1 else f"{m}*t"
        a, b = f.a[m - 1], f.b[m - 1]
        if a != 0.0:
            terms.append((a, f"cos({arg})"))
        if b != 0.0:
            terms.append((b, f"sin({arg})"))
    if not terms:
        return "0"
    parts = []
    for i, (c, sym) in enumerate(terms):
        mag = abs(c)
        if sym == "":
            body = _fmt_num(mag)
        elif mag == 1.0:
            body = sym
        else:
            body = f"{_fmt_num(mag)}*{sym}"
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)
