"""Recursive-descent parser for polynomial and series expressions.

Grammar (explicit ``*`` required, ``^`` takes a nonnegative integer)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := NUMBER | NAME | "(" expr ")"

Division is only allowed by a nonzero constant, so ``3/4*x`` and
``x/2`` are fine while ``1/x`` is rejected.
"""

import re

from gmpy2 import mpq

from .errors import ParseError, UnknownVariable
from .series import MPoly, Series

__all__ = ["parse_expression", "parse_factors", "parse_polynomial", "parse_series"]

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(src):
    tokens = []
    pos = 0
    n = len(src)
    while pos < n:
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {src[pos]!r}", *_linecol(src, pos))
        start = m.start(1) if m.group(1) else m.start(2) if m.group(2) else m.start(3)
        if m.group(1):
            if "." in m.group(1):
                raise ParseError("decimal numbers are not exact; write p/q", *_linecol(src, start))
            tokens.append(("num", int(m.group(1)), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", None, n))
    return tokens


def _linecol(src, pos):
    line = src.count("\n", 0, pos) + 1
    col = pos - (src.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Poly:
    """Sparse polynomial over named variables during parsing."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = {e: c for e, c in terms.items() if c}

    @classmethod
    def const(cls, c, nv):
        return cls({(0,) * nv: mpq(c)})

    def add(self, other, sign=1):
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + sign * c
        return _Poly(t)

    def mul(self, other):
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return _Poly(t)

    def constant(self):
        if all(not any(e) for e in self.terms):
            return self.terms.get(next(iter(self.terms)), mpq(0)) if self.terms else mpq(0)
        return None


class _Parser:
    def __init__(self, src, variables):
        self.src = src
        self.vars = list(variables)
        self.nv = len(self.vars)
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None, cls=ParseError):
        tok = tok or self.peek()
        return cls(msg, *_linecol(self.src, tok[2]))

    def expect_end(self):
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("name", "num") or tok[1] == "(":
                raise self.error("expected an operator (write multiplication explicitly with '*')")
            raise self.error(f"unexpected {tok[1]!r}")

    def expr(self):
        acc = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            acc = acc.add(rhs, 1 if op == "+" else -1)
        return acc

    def term(self, factors=None):
        acc = self.unary(factors)
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            tok = self.take()
            rhs = self.unary(factors if tok[1] == "*" else None)
            if tok[1] == "*":
                acc = acc.mul(rhs)
            else:
                c = rhs.constant()
                if c is None:
                    raise self.error("division is only allowed by a constant", tok)
                if c == 0:
                    raise self.error("division by zero", tok)
                acc = acc.mul(_Poly.const(1 / c, self.nv))
                if factors is not None and factors:
                    factors[-1] = factors[-1].mul(_Poly.const(1 / c, self.nv))
        return acc

    def unary(self, factors=None):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            inner = self.unary(factors)
            if tok[1] == "-":
                if factors is not None:
                    factors.append(_Poly.const(-1, self.nv))
                return inner.mul(_Poly.const(-1, self.nv))
            return inner
        base, k = self.power()
        if factors is not None:
            factors.extend([base] * k if k else [_Poly.const(1, self.nv)])
        out = _Poly.const(1, self.nv)
        for _ in range(k):
            out = out.mul(base)
        return out

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "num":
                raise self.error("exponent must be a nonnegative integer")
            self.take()
            return base, tok[1]
        return base, 1

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return _Poly.const(val, self.nv)
        if kind == "name":
            if val not in self.vars:
                allowed = ", ".join(self.vars)
                raise self.error(f"unknown variable {val!r} (allowed: {allowed})", tok, UnknownVariable)
            e = [0] * self.nv
            e[self.vars.index(val)] = 1
            return _Poly({tuple(e): mpq(1)})
        if kind == "op" and val == "(":
            inner = self.expr()
            close = self.take()
            if close[1] != ")":
                raise self.error("expected ')'", close)
            return inner
        if kind == "end":
            raise self.error("unexpected end of expression", tok)
        raise self.error(f"unexpected {val!r}", tok)


def _to_mpoly(p, nv):
    return MPoly(p.terms, nv)


def parse_polynomial(src, variables=("x", "y")):
    """Polynomial in the given variables."""
    p = _Parser(src, variables)
    out = p.expr()
    p.expect_end()
    return _to_mpoly(out, len(variables))


def parse_factors(src, variables=("x", "y")):
    """``(product, factors)``: top-level multiplicative factors in input order.

    Constant factors are dropped from the list; ``g^k`` contributes ``k``
    copies of ``g``.  A sum at top level is a single factor.
    """
    p = _Parser(src, variables)
    start = p.i
    factors = []
    first = p.term(factors)
    if p.peek()[0] == "op" and p.peek()[1] in "+-":
        p.i = start
        whole = p.expr()
        p.expect_end()
        m = _to_mpoly(whole, len(variables))
        return m, [m]
    p.expect_end()
    nv = len(variables)
    facs = [_to_mpoly(f, nv) for f in factors]
    facs = [f for f in facs if not all(not any(e) for e in f.terms)]
    return _to_mpoly(first, nv), facs


def parse_series(src, var="t"):
    """Polynomial in ``t`` as an exact :class:`Series` (truncation = degree)."""
    p = _Parser(src, (var,))
    out = p.expr()
    p.expect_end()
    coeffs = {e[0]: c for e, c in out.terms.items()}
    top = max(coeffs) if coeffs else 0
    return Series(coeffs, top)


def parse_expression(src):
    """Series when the only variable is ``t``, otherwise a polynomial in x, y (and z)."""
    names = {tok[1] for tok in _tokenize(src) if tok[0] == "name"}
    if names and names <= {"t"}:
        return parse_series(src)
    if "z" in names:
        return parse_polynomial(src, ("x", "y", "z"))
    return parse_polynomial(src, ("x", "y"))
