"""Text form of polynomials over F_{q^d}.

Grammar (whitespace ignored)::

    expr  := term (('+' | '-') term)*
    term  := unary ('*' unary)*
    unary := '-' unary | power
    power := atom ('^' INT)?
    atom  := INT | VAR | 'g' | '(' expr ')'

VAR is x1..xn, or x, y, z for n <= 3. Integers are read modulo p; ``g`` is
the generator of the ambient field F_{q^d} (the level-1 tower field).
"""
from __future__ import annotations

import re

from .errors import ParseError, ValidationError
from .finite_fields import GF
from .point_counting import MultiPoly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")
ALIASES = {"x": 0, "y": 1, "z": 2}
MAX_EXPONENT = 10**6


def _tokenize(text: str):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace is left
            break
        num, name, sym = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            out.append(("int", int(num), start))
        elif name is not None:
            out.append(("name", name, start))
        else:
            if sym not in "+-*^()":
                raise ParseError(f"unknown symbol {sym!r}", start, text)
            out.append(("op", sym, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, n: int, field: GF):
        self.text = text
        self.n = n
        self.F = field
        self.toks = _tokenize(text)
        self.i = 0

    # polynomial arithmetic on {exponent tuple: code}
    def _const(self, c):
        return {(0,) * self.n: c} if c else {}

    def _add(self, a, b):
        out = dict(a)
        for u, c in b.items():
            s = self.F.add(out.get(u, 0), c)
            if s:
                out[u] = s
            else:
                out.pop(u, None)
        return out

    def _neg(self, a):
        return {u: self.F.neg(c) for u, c in a.items()}

    def _mul(self, a, b):
        out = {}
        for u, c in a.items():
            for v, e in b.items():
                w = tuple(x + y for x, y in zip(u, v))
                out = self._add(out, {w: self.F.mul(c, e)})
        return out

    def _pow(self, a, k):
        out = self._const(1)
        while k:
            if k & 1:
                out = self._mul(out, a)
            a = self._mul(a, a)
            k >>= 1
        return out

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty polynomial")
        out = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return MultiPoly.from_dict(self.n, out)

    def expr(self):
        acc = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            acc = self._add(acc, rhs if op == "+" else self._neg(rhs))
        return acc

    def term(self):
        acc = self.unary()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            acc = self._mul(acc, self.unary())
        return acc

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return self._neg(self.unary())
        return self.power()

    def power(self):
        tok = self.peek()
        base = self.atom()
        if self.peek()[:2] != ("op", "^"):
            return base
        self.take()
        e = self.peek()
        if e[0] != "int":
            self.fail("malformed exponent: expected a non-negative integer")
        self.take()
        k = e[1]
        if k > MAX_EXPONENT:
            self.fail("exponent too large", e)
        if tok[:2] == ("name", "g") and base and len(base) == 1 and (0,) * self.n in base:
            # g^k directly via discrete logs
            return self._const(self.F.pow(base[(0,) * self.n], k))
        return self._pow(base, k)

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            return self._const(val % self.F.p)
        if kind == "name":
            if val == "g":
                return self._const(self.F.generator)
            m = re.fullmatch(r"x(\d+)", val)
            if m:
                i = int(m.group(1))
                if not 1 <= i <= self.n:
                    self.fail(f"variable {val} outside x1..x{self.n}", tok)
                idx = i - 1
            elif val in ALIASES and self.n <= 3 and ALIASES[val] < self.n:
                idx = ALIASES[val]
            else:
                self.fail(f"unknown symbol {val!r}", tok)
            u = [0] * self.n
            u[idx] = 1
            return {tuple(u): 1}
        if (kind, val) == ("op", "("):
            inner = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return inner
        self.fail(f"unexpected {val!r}" if kind != "end" else "unexpected end of input", tok)


def parse_poly(text: str, n: int, field: GF) -> MultiPoly:
    """Parse ``text`` as a polynomial in n variables over ``field``."""
    if n < 1:
        raise ValidationError("need at least one variable")
    return _Parser(text, n, field).parse()


def format_coeff(c: int, field: GF) -> str:
    if c < field.p:
        return str(c)
    k = field.log(c)
    return "g" if k == 1 else f"g^{k}"


def format_poly(f: MultiPoly, field: GF) -> str:
    """Inverse of :func:`parse_poly` (up to spacing); terms in descending order."""
    if f.is_zero():
        return "0"
    parts = []
    for u, c in sorted(f.terms, reverse=True):
        mono = [f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(u) if e]
        coeff = format_coeff(c, field)
        if not mono:
            parts.append(coeff)
        elif coeff == "1":
            parts.append("*".join(mono))
        else:
            parts.append("*".join([coeff] + mono))
    return " + ".join(parts)
