"""Operator-expression language.

Grammar (whitespace is insignificant)::

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' power)?
    power  := ['-'] INT | '(' ['-'] INT ')' | 's' | '(' 's' ('+'|'-') INT ')'
    atom   := INT | 's' | IDENT | 'd' IDENT | '(' expr ')'
            | '[' expr ',' expr (';' INT)? ']'

``dNAME`` is the partial derivative in the variable NAME, ``s`` is the
parameter, and ``f^s`` / ``f^(s+k)`` mark the symbolic power of the fixed
element f inside a sandwich expression.  Division is only by scalars.
Subtrees made only of scalars are folded into a single ``ScalarPoly``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .scalars import UniPoly
from .weyl import WeylElement, commutator, bracket_power


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class ResolveError(ValueError):
    pass


# -- AST --------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Partial:
    name: str


@dataclass(frozen=True)
class ScalarPoly:
    poly: UniPoly


@dataclass(frozen=True)
class Sum:
    terms: tuple


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Power:
    base: object
    exponent: int


@dataclass(frozen=True)
class Bracket:
    left: object
    right: object


@dataclass(frozen=True)
class BracketPower:
    left: object
    right: object
    n: int


@dataclass(frozen=True)
class FPower:
    shift: int


Node = Union[Var, Partial, ScalarPoly, Sum, Product, Power, Bracket, BracketPower, FPower]


def mk_sum(terms: Sequence[Node]) -> Node:
    terms = tuple(terms)
    if len(terms) == 1:
        return terms[0]
    if all(isinstance(t, ScalarPoly) for t in terms):
        out = UniPoly()
        for t in terms:
            out = out + t.poly
        return ScalarPoly(out)
    return Sum(terms)


def mk_product(factors: Sequence[Node]) -> Node:
    factors = tuple(factors)
    if len(factors) == 1:
        return factors[0]
    if all(isinstance(f, ScalarPoly) for f in factors):
        out = UniPoly.const(1)
        for f in factors:
            out = out * f.poly
        return ScalarPoly(out)
    return Product(factors)


def mk_power(base: Node, k: int) -> Node:
    if isinstance(base, ScalarPoly):
        if k < 0:
            if not base.poly.is_constant() or base.poly.is_zero():
                raise ValueError("negative power of a non-constant scalar")
            return ScalarPoly(UniPoly.const(1 / base.poly.constant_value() ** -k))
        return ScalarPoly(base.poly ** k)
    return Power(base, k)


# -- tokenizer ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            out.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(("ident", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()[],;":
                raise ParseError(f"unexpected character {ch!r}", m.start(3))
            out.append(("op", ch, m.start(3)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def at(self, value: str) -> bool:
        kind, v, _ = self.tok
        return kind == "op" and v == value

    def take(self, value: str) -> None:
        if not self.at(value):
            kind, v, pos = self.tok
            raise ParseError(f"expected {value!r}, found {v or 'end of input'!r}", pos)
        self.i += 1

    def take_int(self) -> int:
        kind, v, pos = self.tok
        if kind != "int":
            raise ParseError(f"expected an integer, found {v or 'end of input'!r}", pos)
        self.i += 1
        return int(v)

    def expr(self) -> Node:
        terms = []
        negate = False
        if self.at("-"):
            self.i += 1
            negate = True
        elif self.at("+"):
            self.i += 1
        terms.append(self._signed(self.term(), negate))
        while self.at("+") or self.at("-"):
            negate = self.tok[1] == "-"
            self.i += 1
            while self.at("-") or self.at("+"):  # stacked unary signs
                negate ^= self.tok[1] == "-"
                self.i += 1
            terms.append(self._signed(self.term(), negate))
        return mk_sum(terms)

    @staticmethod
    def _signed(node: Node, negate: bool) -> Node:
        if not negate:
            return node
        if isinstance(node, ScalarPoly):
            return ScalarPoly(-node.poly)
        if isinstance(node, Product):
            if isinstance(node.factors[0], ScalarPoly):
                return mk_product((ScalarPoly(-node.factors[0].poly),) + node.factors[1:])
            return Product((ScalarPoly(UniPoly.const(-1)),) + node.factors)
        return mk_product((ScalarPoly(UniPoly.const(-1)), node))

    def term(self) -> Node:
        factors = [self.factor()]
        while self.at("*") or self.at("/"):
            op = self.tok[1]
            pos = self.tok[2]
            self.i += 1
            f = self.factor()
            if op == "/":
                if not (isinstance(f, ScalarPoly) and f.poly.is_constant() and not f.poly.is_zero()):
                    raise ParseError("division only by nonzero constants", pos)
                f = ScalarPoly(UniPoly.const(1 / f.poly.constant_value()))
            factors.append(f)
        return mk_product(factors)

    def factor(self) -> Node:
        start = self.tok[2]
        base = self.atom()
        if not self.at("^"):
            return base
        self.i += 1
        if isinstance(base, Var) and base.name == "f" and self._at_s_power():
            return FPower(self._s_shift())
        k = self._int_power()
        if isinstance(base, FPower):
            raise ParseError("power of f^s", start)
        return mk_power(base, k)

    def _at_s_power(self) -> bool:
        kind, v, _ = self.tok
        if kind == "ident" and v == "s":
            return True
        if self.at("("):
            kind2, v2, _ = self.toks[self.i + 1]
            return kind2 == "ident" and v2 == "s"
        return False

    def _s_shift(self) -> int:
        if self.tok[1] == "s" and self.tok[0] == "ident":
            self.i += 1
            return 0
        self.take("(")
        self.i += 1  # the 's'
        shift = 0
        if self.at("+") or self.at("-"):
            sign = -1 if self.tok[1] == "-" else 1
            self.i += 1
            shift = sign * self.take_int()
        self.take(")")
        return shift

    def _int_power(self) -> int:
        if self.at("("):
            self.i += 1
            k = self._int_power()
            self.take(")")
            return k
        sign = 1
        if self.at("-"):
            self.i += 1
            sign = -1
        return sign * self.take_int()

    def atom(self) -> Node:
        kind, v, pos = self.tok
        if kind == "int":
            self.i += 1
            return ScalarPoly(UniPoly.const(int(v)))
        if kind == "ident":
            self.i += 1
            if v == "s":
                return ScalarPoly(UniPoly.s())
            if v.startswith("d") and len(v) > 1:
                return Partial(v[1:])
            return Var(v)
        if self.at("("):
            self.i += 1
            node = self.expr()
            self.take(")")
            return node
        if self.at("["):
            self.i += 1
            left = self.expr()
            self.take(",")
            right = self.expr()
            n = None
            if self.at(";"):
                self.i += 1
                n = self.take_int()
            self.take("]")
            return Bracket(left, right) if n is None else BracketPower(left, right, n)
        raise ParseError(f"unexpected {v or 'end of input'!r}", pos)


def parse(text: str) -> Node:
    p = _Parser(text)
    node = p.expr()
    kind, v, pos = p.tok
    if kind != "end":
        raise ParseError(f"unexpected trailing {v!r}", pos)
    return node


# -- rendering ---------------------------------------------------------------

def render(node: Node) -> str:
    """Canonical text; ``parse(render(n)) == n`` for folded trees."""
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Partial):
        return "d" + node.name
    if isinstance(node, ScalarPoly):
        return f"({node.poly.to_text()})"
    if isinstance(node, FPower):
        if node.shift == 0:
            return "f^s"
        sign = "+" if node.shift > 0 else "-"
        return f"f^(s{sign}{abs(node.shift)})"
    if isinstance(node, Sum):
        return " + ".join(f"({render(t)})" if isinstance(t, Sum) else render(t) for t in node.terms)
    if isinstance(node, Product):
        return "*".join(f"({render(f)})" if isinstance(f, (Sum, Product)) else render(f)
                        for f in node.factors)
    if isinstance(node, Power):
        base = render(node.base)
        if isinstance(node.base, (Sum, Product, Power)):
            base = f"({base})"
        return f"{base}^({node.exponent})" if node.exponent < 0 else f"{base}^{node.exponent}"
    if isinstance(node, Bracket):
        return f"[{render(node.left)}, {render(node.right)}]"
    if isinstance(node, BracketPower):
        return f"[{render(node.left)}, {render(node.right)}; {node.n}]"
    raise TypeError(f"not an expression node: {node!r}")


# -- evaluation --------------------------------------------------------------

class SandwichExpr:
    """Formal sum of terms alpha * f^(s+k) * beta."""

    def __init__(self, terms: Sequence[tuple[WeylElement, int, WeylElement]]):
        self.terms = [(a, k, b) for a, k, b in terms if not a.is_zero() and not b.is_zero()]

    def __add__(self, other: "SandwichExpr") -> "SandwichExpr":
        return SandwichExpr(self.terms + other.terms)

    def __neg__(self) -> "SandwichExpr":
        return SandwichExpr([(-a, k, b) for a, k, b in self.terms])

    def lmul(self, op: WeylElement) -> "SandwichExpr":
        return SandwichExpr([(op * a, k, b) for a, k, b in self.terms])

    def rmul(self, op: WeylElement) -> "SandwichExpr":
        return SandwichExpr([(a, k, b * op) for a, k, b in self.terms])


Value = Union[WeylElement, SandwichExpr]


@dataclass
class Context:
    names: Sequence[str]
    f: Optional[WeylElement] = None
    bindings: Mapping[str, Value] | None = None

    @property
    def nvars(self) -> int:
        return len(self.names)


def evaluate(node: Node, ctx: Context) -> Value:
    n = ctx.nvars
    names = list(ctx.names)

    def ev(nd) -> Value:
        if isinstance(nd, ScalarPoly):
            return WeylElement.scalar(n, nd.poly)
        if isinstance(nd, Var):
            if ctx.bindings and nd.name in ctx.bindings:
                return ctx.bindings[nd.name]
            if nd.name == "f":
                if ctx.f is None:
                    raise ResolveError("f used but no element f is declared")
                return ctx.f
            if nd.name not in names:
                raise ResolveError(f"unknown identifier {nd.name!r}")
            return WeylElement.x(n, names.index(nd.name))
        if isinstance(nd, Partial):
            if nd.name not in names:
                raise ResolveError(f"unknown variable in partial d{nd.name}")
            return WeylElement.d(n, names.index(nd.name))
        if isinstance(nd, FPower):
            one = WeylElement.one(n)
            return SandwichExpr([(one, nd.shift, one)])
        if isinstance(nd, Sum):
            vals = [ev(t) for t in nd.terms]
            if any(isinstance(v, SandwichExpr) for v in vals):
                if not all(isinstance(v, SandwichExpr) for v in vals):
                    raise ResolveError("cannot add an operator to a sandwich term")
                out = SandwichExpr([])
                for v in vals:
                    out = out + v
                return out
            out = WeylElement.zero(n)
            for v in vals:
                out = out + v
            return out
        if isinstance(nd, Product):
            acc = ev(nd.factors[0])
            for fac in nd.factors[1:]:
                acc = _mul(acc, ev(fac))
            return acc
        if isinstance(nd, Power):
            base = ev(nd.base)
            if isinstance(base, SandwichExpr):
                raise ResolveError("power of a sandwich expression")
            if nd.exponent < 0:
                return _negative_power(base, nd.exponent)
            return base ** nd.exponent
        if isinstance(nd, (Bracket, BracketPower)):
            left, right = ev(nd.left), ev(nd.right)
            k = 1 if isinstance(nd, Bracket) else nd.n
            if isinstance(left, SandwichExpr):
                raise ResolveError("left side of a bracket must be an operator")
            if isinstance(right, SandwichExpr):
                if k != 1:
                    raise ResolveError("bracket powers with f^s are not supported")
                return right.lmul(left) + (-right.rmul(left))
            return bracket_power(left, right, k)
        raise TypeError(f"not an expression node: {nd!r}")

    return ev(node)


def _mul(a: Value, b: Value) -> Value:
    if isinstance(a, SandwichExpr) and isinstance(b, SandwichExpr):
        raise ResolveError("product of two f^s factors")
    if isinstance(a, SandwichExpr):
        return a.rmul(b)
    if isinstance(b, SandwichExpr):
        return b.lmul(a)
    return a * b


def _negative_power(base: WeylElement, k: int) -> WeylElement:
    if len(base.terms) != 1:
        raise ResolveError("negative powers only of monomials")
    (a, b), c = next(iter(base.terms.items()))
    if any(b) or c != UniPoly.const(1):
        raise ResolveError("negative powers only of monic x-monomials")
    e = tuple(k * ai for ai in a)
    return WeylElement.monomial(base.nvars, e, inverted=a)


def evaluate_text(text: str, ctx: Context) -> Value:
    return evaluate(parse(text), ctx)


def operator(text: str, names: Sequence[str], **kw) -> WeylElement:
    """Parse and evaluate a plain operator expression."""
    v = evaluate_text(text, Context(names, **kw))
    if isinstance(v, SandwichExpr):
        raise ResolveError("expected an operator, got a sandwich expression")
    return v


def scalar(text: str) -> UniPoly:
    node = parse(text)
    if not isinstance(node, ScalarPoly):
        raise ResolveError(f"{text!r} is not a polynomial in s")
    return node.poly
