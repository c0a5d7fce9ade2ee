"""Sparse multivariate integer polynomials: parsing, exact evaluation and
an exhaustive root search used as the reference oracle.

Coefficients are Python ints throughout, so evaluation never overflows.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

Exponent = tuple[int, ...]


class ParseError(ValueError):
    """Raised for malformed polynomial text; ``pos`` is the 0-based column."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class Polynomial:
    k: int
    terms: Mapping[Exponent, int]
    names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("a polynomial needs at least one variable")
        clean = {}
        for exp, coef in self.terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.k or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp} for k={self.k}")
            if int(coef) != 0:
                clean[exp] = int(coef)
        object.__setattr__(self, "terms", dict(sorted(clean.items(), reverse=True)))
        if not self.names:
            names = ("x",) if self.k == 1 else tuple(f"x{i + 1}" for i in range(self.k))
            object.__setattr__(self, "names", names)

    def __hash__(self):
        return hash((self.k, tuple(self.terms.items())))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for exp, coef in self.terms.items():
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, exp) if e
            )
            if not mono:
                body = str(abs(coef))
            elif abs(coef) == 1:
                body = mono
            else:
                body = f"{abs(coef)}*{mono}"
            sign = "-" if coef < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "terms": [{"exp": list(e), "coef": str(c)} for e, c in self.terms.items()],
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> "Polynomial":
        if isinstance(obj, str):
            obj = json.loads(obj)
        terms: dict[Exponent, int] = {}
        for t in obj["terms"]:
            exp = tuple(t["exp"])
            terms[exp] = terms.get(exp, 0) + int(t["coef"])
        return cls(int(obj["k"]), terms)


# -- arithmetic on raw term dicts -------------------------------------------

def _add(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _pow(a: dict, n: int, k: int) -> dict:
    result = {(0,) * k: 1}
    base = a
    while n:
        if n & 1:
            result = _mul(result, base)
        n >>= 1
        if n:
            base = _mul(base, base)
    return result


# -- parser -------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z](?:_?\d+)?)"
    r"|(?P<op>\*\*|[-+*^()=]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[col]!r}", col)
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        if kind == "num" and not value.isdigit():
            raise ParseError(f"non-integer literal {value!r}", start)
        if value == "**":
            value = "^"
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        names: list[str] = []
        for kind, value, _ in self.tokens:
            if kind == "name" and value not in names:
                names.append(value)
        self.names = names
        self.k = len(names)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, v, pos = self.take()
        if v != value:
            raise ParseError(f"expected {value!r}, found {v or 'end of input'!r}", pos)

    def const(self, c: int) -> dict:
        return {(0,) * self.k: c} if c else {}

    def equation(self) -> dict:
        lhs = self.expr()
        kind, value, pos = self.peek()
        if value == "=":
            self.take()
            rhs = self.expr()
            lhs = _add(lhs, rhs, -1)
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {value!r}", pos)
        return lhs

    def expr(self) -> dict:
        acc = self.term()
        while self.peek()[1] in ("+", "-"):
            sign = 1 if self.take()[1] == "+" else -1
            acc = _add(acc, self.term(), sign)
        return acc

    def term(self) -> dict:
        acc = self.unary()
        while True:
            kind, value, _ = self.peek()
            if value == "*":
                self.take()
                acc = _mul(acc, self.unary())
            elif kind in ("num", "name") or value == "(":
                # implicit multiplication: 2x, 3(x+1), x y
                acc = _mul(acc, self.power())
            else:
                return acc

    def unary(self) -> dict:
        value = self.peek()[1]
        if value == "-":
            self.take()
            return _add({}, self.unary(), -1)
        if value == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> dict:
        base = self.primary()
        if self.peek()[1] == "^":
            self.take()
            kind, value, pos = self.take()
            if value == "-":
                raise ParseError("negative exponent", pos)
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer literal", pos)
            base = _pow(base, int(value), self.k)
            if self.peek()[1] == "^":
                raise ParseError("chained exponent", self.peek()[2])
        return base

    def primary(self) -> dict:
        kind, value, pos = self.take()
        if kind == "num":
            return self.const(int(value))
        if kind == "name":
            idx = self.names.index(value)
            exp = [0] * self.k
            exp[idx] = 1
            return {tuple(exp): 1}
        if value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {value or 'end of input'!r}", pos)


def parse_polynomial(text: str) -> Polynomial:
    """Parse ``text`` into expanded canonical form.

    Variables are numbered in order of first appearance. An ``= rhs`` suffix is
    folded into the left side, so ``"x^2 = 4"`` and ``"x^2 - 4 = 0"`` agree.

    >>> parse_polynomial("(x - 2)^2").terms
    {(2,): 1, (1,): -4, (0,): 4}
    """
    parser = _Parser(text)
    if parser.k == 0:
        raise ParseError("expression has no variables", 0)
    terms = parser.equation()
    return Polynomial(parser.k, terms, tuple(parser.names))


# -- evaluation and search ----------------------------------------------------

def evaluate(p: Polynomial, pt: Sequence[int]) -> int:
    if len(pt) != p.k:
        raise ValueError(f"point has {len(pt)} coordinates, polynomial has k={p.k}")
    pt = [int(x) for x in pt]
    total = 0
    for exp, coef in p.terms.items():
        v = coef
        for x, e in zip(pt, exp):
            if e:
                v *= x**e
        total += v
    return total


def iter_roots(p: Polynomial, bound: int) -> Iterator[tuple[int, ...]]:
    """All roots in ``{0..bound}^k`` in lexicographic order."""
    if bound < 0:
        raise ValueError("bound must be non-negative")
    for pt in itertools.product(range(bound + 1), repeat=p.k):
        if evaluate(p, pt) == 0:
            yield pt


def brute_force_search(p: Polynomial, bound: int) -> tuple[int, ...] | None:
    """Lexicographically smallest root in the box ``{0..bound}^k``, or None."""
    return next(iter_roots(p, bound), None)
