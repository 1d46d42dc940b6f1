"""Tiny exact expression language for big exponents k.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := atom ('^' unary)?
    atom   := INT | NAME | '(' expr ')' | 'prod' '(' expr ',' NAME '=' expr '..' expr ')'

Names are bound by the caller (q, n, ...) or by prod.  Arithmetic is exact;
the final value must be an integer.
"""

from __future__ import annotations

import re
from fractions import Fraction

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\.\.|\*\*|[-+*/^(),=]))")


class KExprError(ValueError):
    pass


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise KExprError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        tok = m.group(1) or m.group(2) or m.group(3)
        out.append("^" if tok == "**" else tok)
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens: list[str], env: dict[str, int]):
        self.toks, self.i, self.env = tokens, 0, dict(env)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise KExprError(f"expected {want or 'token'}, found {tok!r}")
        self.i += 1
        return tok

    # each parse_* returns a closure env -> Fraction so prod can rebind names
    def expr(self):
        left = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            right = self.term()
            left = (lambda a, b: lambda e: a(e) + b(e))(left, right) if op == "+" else \
                (lambda a, b: lambda e: a(e) - b(e))(left, right)
        return left

    def term(self):
        left = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            right = self.unary()
            if op == "*":
                left = (lambda a, b: lambda e: a(e) * b(e))(left, right)
            else:
                left = (lambda a, b: lambda e: _div(a(e), b(e)))(left, right)
        return left

    def factor(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            exp = self.unary()
            return lambda e: _pow(base(e), exp(e))
        return base

    def unary(self):
        if self.peek() == "-":
            self.take()
            inner = self.unary()
            return lambda e: -inner(e)
        return self.factor()

    def atom(self):
        tok = self.take()
        if tok.isdigit():
            v = Fraction(int(tok))
            return lambda e: v
        if tok == "(":
            inner = self.expr()
            self.take(")")
            return inner
        if tok == "prod":
            self.take("(")
            body = self.expr()
            self.take(",")
            var = self.take()
            if not re.fullmatch(r"[A-Za-z_]\w*", var):
                raise KExprError("prod needs a variable name")
            self.take("=")
            lo = self.expr()
            self.take("..")
            hi = self.expr()
            self.take(")")

            def run(e):
                a, b = _as_int(lo(e)), _as_int(hi(e))
                acc = Fraction(1)
                for j in range(a, b + 1):
                    acc *= body({**e, var: Fraction(j)})
                return acc
            return run
        if re.fullmatch(r"[A-Za-z_]\w*", tok):
            def lookup(e, name=tok):
                if name not in e:
                    raise KExprError(f"unbound name {name!r}")
                return Fraction(e[name])
            return lookup
        raise KExprError(f"unexpected token {tok!r}")


def _as_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise KExprError(f"{x} is not an integer")
    return x.numerator


def _div(a: Fraction, b: Fraction) -> Fraction:
    if b == 0:
        raise KExprError("division by zero")
    return a / b


def _pow(a: Fraction, b: Fraction) -> Fraction:
    e = _as_int(b)
    if e < 0:
        if a == 0:
            raise KExprError("zero to a negative power")
        return Fraction(1) / a ** (-e)
    if e > 1 << 20:
        raise KExprError("exponent too large")
    return a ** e


def eval_k(text: str, **env: int) -> int:
    """Evaluate a k expression such as "2^64+13" or "prod(q^i-1,i=1..n)"."""
    text = str(text).strip()
    if text.isdigit():
        return int(text)
    p = _Parser(_tokenize(text), {})
    node = p.expr()
    if p.peek() is not None:
        raise KExprError(f"trailing input at {p.peek()!r}")
    return _as_int(node({k: Fraction(v) for k, v in env.items()}))
